// Editor draft: the client-side scene being built, plus the action log
// that becomes the uploaded session. Pure state, no DOM — the panel in
// editor_panel.ts renders it. Validation here mirrors the server's hard
// errors so bad drafts never generate network traffic.

import type {
    InstanceDoc,
    KnowledgeDoc,
    PoagDoc,
    PortalDoc,
    SceneDoc,
    SessionActionDoc,
    SessionDoc,
    TypeDoc,
} from "./types.js";
import { normalizeTerm, nowIso } from "./util.js";

export type TileKind = "floor" | "wall" | "void";

const TILE_CHAR: Record<TileKind, string> = { floor: ".", wall: "#", void: " " };

export class EditError extends Error {}

export class EditorDraft {
    tiles: string[];
    portals: PortalDoc[] = [];
    spawns: [number, number][] = [];
    goals: string[] = [];
    startPosition: [number, number] | null = null;
    instances: InstanceDoc[] = [];
    knowledge: KnowledgeDoc = { types: [], actions: [], goals: [], poags: [] };
    actions: SessionActionDoc[] = [];
    dirty = false;

    private nextInstance = 1;
    private nextPoag = 1;

    constructor(
        public id: string,
        public name: string,
        public width: number,
        public height: number,
    ) {
        this.tiles = Array.from({ length: height }, () => ".".repeat(width));
    }

    // ---- grid helpers

    inBounds(x: number, y: number): boolean {
        return x >= 0 && x < this.width && y >= 0 && y < this.height;
    }

    tileAt(x: number, y: number): string {
        if (!this.inBounds(x, y)) throw new EditError(`(${x}, ${y}) is outside the grid`);
        return this.tiles[y][x];
    }

    private occupied(x: number, y: number): boolean {
        return (
            this.instances.some((i) => i.pos[0] === x && i.pos[1] === y) ||
            this.portals.some((p) => p.pos[0] === x && p.pos[1] === y) ||
            this.spawns.some(([sx, sy]) => sx === x && sy === y)
        );
    }

    private log(kind: string, payload: Record<string, unknown>) {
        this.actions.push({ seq: this.actions.length + 1, kind, payload });
        this.dirty = true;
    }

    // ---- edits (each mirrors a server-side EditOp and is logged)

    paintTile(x: number, y: number, kind: TileKind) {
        this.tileAt(x, y);
        if (kind !== "floor" && this.occupied(x, y)) {
            throw new EditError(`(${x}, ${y}) hosts an entity; remove it first`);
        }
        const row = this.tiles[y];
        this.tiles[y] = row.slice(0, x) + TILE_CHAR[kind] + row.slice(x + 1);
        this.log("edit-tile", { scene: this.id, op: "set-tile", x, y, tile: kind });
    }

    private requireFloor(x: number, y: number, what: string) {
        if (this.tileAt(x, y) !== ".") {
            throw new EditError(`${what} needs a floor tile, (${x}, ${y}) is not one`);
        }
    }

    ensureType(name: string): string {
        const cleaned = normalizeTerm(name);
        if (!cleaned) throw new EditError("object type name is empty");
        if (!this.knowledge.types.some((t) => t.name === cleaned)) {
            this.knowledge.types.push({ name: cleaned });
            this.log("define-type", { name: cleaned });
        }
        return cleaned;
    }

    defineCustomType(name: string, parent: string | null, recipe: { shape: string; transform: string }[]) {
        const cleaned = normalizeTerm(name);
        if (!cleaned) throw new EditError("custom item needs a name");
        if (this.knowledge.types.some((t) => t.name === cleaned)) {
            throw new EditError(`type "${cleaned}" already exists`);
        }
        const entry: TypeDoc = { name: cleaned, custom: true };
        const payload: Record<string, unknown> = { name: cleaned };
        if (parent) {
            entry.parent = normalizeTerm(parent);
            payload.parent = entry.parent;
            if (!this.knowledge.types.some((t) => t.name === entry.parent)) {
                throw new EditError(`parent type "${entry.parent}" is not defined`);
            }
        }
        if (recipe.length) {
            entry.recipe = recipe;
            payload.recipe = recipe;
        }
        this.knowledge.types.push(entry);
        this.log("define-type", payload);
        return cleaned;
    }

    placeObject(x: number, y: number, typeName: string, states: string[] = []): InstanceDoc {
        this.requireFloor(x, y, "an object");
        const type = this.ensureType(typeName);
        const instance: InstanceDoc = { id: this.nextInstance++, type, pos: [x, y] };
        const cleanedStates = states.map(normalizeTerm).filter(Boolean);
        if (cleanedStates.length) instance.states = cleanedStates;
        this.instances.push(instance);
        const payload: Record<string, unknown> = { scene: this.id, type, x, y };
        if (cleanedStates.length) payload.states = cleanedStates;
        this.log("place-object", payload);
        return instance;
    }

    removeObject(instanceId: number) {
        const index = this.instances.findIndex((i) => i.id === instanceId);
        if (index < 0) throw new EditError(`no instance ${instanceId} in the draft`);
        this.instances.splice(index, 1);
        this.log("edit-tile", { scene: this.id, op: "remove-instance", ref: instanceId });
    }

    placePortal(kind: "entry" | "exit", x: number, y: number, target?: string) {
        this.requireFloor(x, y, "a portal");
        if (kind === "entry" && this.portals.some((p) => p.kind === "entry")) {
            throw new EditError("the scene already has an entry portal");
        }
        const portal: PortalDoc = { kind, pos: [x, y] };
        if (kind === "exit" && target) portal.target = target;
        this.portals.push(portal);
        if (kind === "entry") this.startPosition = [x, y]; // start is the entry
        const payload: Record<string, unknown> = { scene: this.id, kind, x, y };
        if (portal.target) payload.target = portal.target;
        this.log("place-portal", payload);
    }

    addSpawn(x: number, y: number) {
        this.requireFloor(x, y, "a monster spawn");
        if (this.spawns.some(([sx, sy]) => sx === x && sy === y)) return;
        this.spawns.push([x, y]);
        this.log("edit-tile", { scene: this.id, op: "add-spawn", x, y });
    }

    addGoal(goal: string) {
        const cleaned = normalizeTerm(goal);
        if (!cleaned) throw new EditError("goal is empty");
        if (this.goals.includes(cleaned)) return;
        this.goals.push(cleaned);
        this.knowledge.goals.push(cleaned);
        this.log("edit-tile", { scene: this.id, op: "add-goal", goal: cleaned });
    }

    // The rule dialog: cannot submit without item and action.
    definePoag(draft: PoagDoc): PoagDoc {
        const item = normalizeTerm(draft.item);
        const action = normalizeTerm(draft.action);
        if (!item || !action) throw new EditError("a rule needs both an item and an action");
        this.ensureType(item);
        if (!this.knowledge.actions.includes(action)) this.knowledge.actions.push(action);
        const poag: PoagDoc = {
            id: this.nextPoag++,
            item,
            action,
            prerequisites: draft.prerequisites.map((p) => ({
                kind: p.kind ?? "object-present",
                name: normalizeTerm(p.name),
                ...(p.state ? { state: normalizeTerm(p.state) } : {}),
            })),
            outcome: draft.outcome.map((o) => ({
                name: normalizeTerm(o.name),
                ...(o.state ? { state: normalizeTerm(o.state) } : {}),
            })),
        };
        for (const o of poag.outcome) this.ensureType(o.name);
        if (draft.goal) {
            poag.goal = normalizeTerm(draft.goal);
            if (!this.knowledge.goals.includes(poag.goal)) this.knowledge.goals.push(poag.goal);
        }
        this.knowledge.poags.push(poag);
        const payload: Record<string, unknown> = {
            item: poag.item,
            action: poag.action,
            prerequisites: poag.prerequisites,
            outcome: poag.outcome,
        };
        if (poag.goal) payload.goal = poag.goal;
        this.log("define-poag", payload);
        return poag;
    }

    // ---- validation mirroring the server's hard errors

    validate(): string[] {
        const problems: string[] = [];
        if (!this.portals.some((p) => p.kind === "entry")) {
            problems.push("place an entry portal (it defines where the character starts)");
        }
        if (!this.portals.some((p) => p.kind === "exit")) {
            problems.push("place at least one exit portal");
        }
        const entry = this.portals.find((p) => p.kind === "entry");
        if (entry && this.startPosition &&
            (entry.pos[0] !== this.startPosition[0] || entry.pos[1] !== this.startPosition[1])) {
            problems.push("start position must coincide with the entry portal");
        }
        for (const p of this.portals) {
            if (this.tileAt(p.pos[0], p.pos[1]) !== ".") {
                problems.push(`${p.kind} portal at (${p.pos}) is not on floor`);
            }
        }
        return problems;
    }

    // ---- serialization

    toSceneDoc(): SceneDoc {
        return {
            id: this.id,
            name: this.name,
            width: this.width,
            height: this.height,
            tiles: [...this.tiles],
            portals: this.portals.map((p) => ({ ...p })),
            monster_spawns: this.spawns.map(([x, y]) => [x, y] as [number, number]),
            goals: [...this.goals],
            start_position: this.startPosition ? [...this.startPosition] : null,
            instances: this.instances.map((i) => ({ ...i, pos: [...i.pos] as [number, number] })),
            knowledge: {
                types: this.knowledge.types.map((t) => ({ ...t })),
                actions: [...this.knowledge.actions],
                goals: [...this.knowledge.goals],
                poags: this.knowledge.poags.map((p) => ({ ...p })),
            },
        };
    }

    toSessionDoc(designer: string, sessionId?: string): SessionDoc {
        return {
            format: "gecka3d-1",
            id: sessionId ?? `${this.id}-${Date.now()}`,
            designer,
            timestamp: nowIso(),
            scenes: [this.id],
            actions: this.actions.map((a) => ({ ...a })),
        };
    }

    static fromSceneDoc(doc: SceneDoc): EditorDraft {
        const draft = new EditorDraft(doc.id, doc.name, doc.width, doc.height);
        draft.tiles = [...doc.tiles];
        draft.portals = doc.portals.map((p) => ({ ...p }));
        draft.spawns = doc.monster_spawns.map(([x, y]) => [x, y]);
        draft.goals = [...doc.goals];
        draft.startPosition = doc.start_position ? [...doc.start_position] : null;
        draft.instances = doc.instances.map((i) => ({ ...i, pos: [...i.pos] as [number, number] }));
        draft.nextInstance = Math.max(0, ...draft.instances.map((i) => i.id)) + 1;
        if (doc.knowledge) {
            draft.knowledge = {
                types: doc.knowledge.types.map((t) => ({ ...t })),
                actions: [...doc.knowledge.actions],
                goals: [...doc.knowledge.goals],
                poags: doc.knowledge.poags.map((p) => ({ ...p })),
            };
            draft.nextPoag = Math.max(0, ...draft.knowledge.poags.map((p) => p.id ?? 0)) + 1;
        }
        draft.dirty = false;
        return draft;
    }
}
