// Editor view: tile painting, drag-drop-ish palette, rule dialog, custom
// item builder, save-to-server. All mutation goes through EditorDraft so
// the uploaded session mirrors exactly what happened on screen.

import type { Api } from "./api.js";
import { EditError, EditorDraft, type TileKind } from "./editor.js";
import type { PoagDoc, PrereqRef, TermRef } from "./types.js";
import { el } from "./util.js";

type Tool =
    | { kind: "tile"; tile: TileKind }
    | { kind: "object" }
    | { kind: "portal"; portal: "entry" | "exit" }
    | { kind: "spawn" }
    | { kind: "erase" };

const TILE_CLASS: Record<string, string> = { ".": "floor", "#": "wall", " ": "void" };

export class EditorPanel {
    draft: EditorDraft;
    tool: Tool = { kind: "tile", tile: "wall" };
    root: HTMLElement;
    private status: HTMLElement;
    private gridHost: HTMLElement;
    private typeInput: HTMLInputElement;
    private stateInput: HTMLInputElement;
    private exitTargetInput: HTMLInputElement;

    constructor(private api: Api, width = 16, height = 12) {
        this.draft = new EditorDraft(`scene-${Date.now() % 100000}`, "untitled", width, height);
        this.status = el("div.status");
        this.gridHost = el("div.grid-host");
        this.typeInput = el<"input">("input", { placeholder: "object type (e.g. bread)", value: "bread" });
        this.stateInput = el<"input">("input", { placeholder: "state tags (comma)" });
        this.exitTargetInput = el<"input">("input", { placeholder: "exit target scene (optional)" });
        this.root = this.build();
        this.renderGrid();
    }

    private say(text: string, isError = false) {
        this.status.textContent = text;
        this.status.classList.toggle("error", isError);
    }

    private act(fn: () => void) {
        try {
            fn();
            this.renderGrid();
            this.say(`${this.draft.actions.length} actions logged`);
        } catch (error) {
            this.say(error instanceof EditError ? error.message : String(error), true);
        }
    }

    private build(): HTMLElement {
        const tools: [string, Tool][] = [
            ["floor", { kind: "tile", tile: "floor" }],
            ["wall", { kind: "tile", tile: "wall" }],
            ["void", { kind: "tile", tile: "void" }],
            ["object", { kind: "object" }],
            ["entry", { kind: "portal", portal: "entry" }],
            ["exit", { kind: "portal", portal: "exit" }],
            ["zombie spawn", { kind: "spawn" }],
            ["erase object", { kind: "erase" }],
        ];
        const toolbar = el("div.toolbar");
        for (const [label, tool] of tools) {
            const button = el<"button">("button.tool", {}, label);
            button.addEventListener("click", () => {
                this.tool = tool;
                toolbar.querySelectorAll("button").forEach((b) => b.classList.remove("active"));
                button.classList.add("active");
            });
            if (label === "wall") button.classList.add("active");
            toolbar.append(button);
        }

        const idInput = el<"input">("input", { value: this.draft.id });
        idInput.addEventListener("change", () => {
            this.draft.id = idInput.value.trim() || this.draft.id;
        });
        const goalInput = el<"input">("input", { placeholder: "scene goal (e.g. quench thirst)" });
        const addGoal = el<"button">("button", {}, "add goal");
        addGoal.addEventListener("click", () => this.act(() => {
            this.draft.addGoal(goalInput.value);
            goalInput.value = "";
        }));

        const saveButton = el<"button">("button.primary", {}, "save to server");
        saveButton.addEventListener("click", () => void this.save());
        const loadInput = el<"input">("input", { placeholder: "scene id to load" });
        const loadButton = el<"button">("button", {}, "load");
        loadButton.addEventListener("click", () => void this.load(loadInput.value.trim()));

        return el(
            "div.editor",
            {},
            el("div.row", {}, el("label", {}, "scene id "), idInput, saveButton, loadInput, loadButton),
            toolbar,
            el("div.row", {}, this.typeInput, this.stateInput, this.exitTargetInput),
            el("div.row", {}, goalInput, addGoal,
                this.dialogButton("define rule…", () => this.poagDialog()),
                this.dialogButton("custom item…", () => this.customItemDialog())),
            this.gridHost,
            this.status,
        );
    }

    private dialogButton(label: string, open: () => void): HTMLElement {
        const button = el<"button">("button", {}, label);
        button.addEventListener("click", open);
        return button;
    }

    private clickCell(x: number, y: number) {
        const tool = this.tool;
        this.act(() => {
            if (tool.kind === "tile") this.draft.paintTile(x, y, tool.tile);
            else if (tool.kind === "object") {
                const states = this.stateInput.value.split(",").map((s) => s.trim()).filter(Boolean);
                this.draft.placeObject(x, y, this.typeInput.value, states);
            } else if (tool.kind === "portal") {
                const target = tool.portal === "exit" ? this.exitTargetInput.value.trim() || undefined : undefined;
                this.draft.placePortal(tool.portal, x, y, target);
            } else if (tool.kind === "spawn") this.draft.addSpawn(x, y);
            else {
                const hit = this.draft.instances.find((i) => i.pos[0] === x && i.pos[1] === y);
                if (!hit) throw new EditError(`nothing to erase at (${x}, ${y})`);
                this.draft.removeObject(hit.id);
            }
        });
    }

    renderGrid() {
        const grid = el("div.grid.editor-grid");
        grid.style.setProperty("--cols", String(this.draft.width));
        grid.style.setProperty("--rows", String(this.draft.height));
        for (let y = 0; y < this.draft.height; y++) {
            for (let x = 0; x < this.draft.width; x++) {
                const node = el("div.cell." + (TILE_CLASS[this.draft.tiles[y][x]] ?? "void"), {
                    "data-x": String(x),
                    "data-y": String(y),
                });
                node.style.gridColumn = String(x + 1);
                node.style.gridRow = String(y + 1);
                const portal = this.draft.portals.find((p) => p.pos[0] === x && p.pos[1] === y);
                if (portal) node.classList.add(`portal-${portal.kind}`);
                if (this.draft.spawns.some(([sx, sy]) => sx === x && sy === y)) {
                    node.classList.add("zombie");
                    node.append(el("span.glyph", {}, "Z"));
                }
                const instance = this.draft.instances.find((i) => i.pos[0] === x && i.pos[1] === y);
                if (instance) {
                    node.classList.add("item");
                    node.title = instance.type;
                    node.append(el("span.glyph", {}, "▣"));
                }
                node.addEventListener("click", () => this.clickCell(x, y));
                grid.append(node);
            }
        }
        this.gridHost.replaceChildren(grid);
    }

    /** The item-combination dialog: item + action are mandatory. */
    private poagDialog() {
        const item = prompt("item (the object the rule is about):", this.typeInput.value);
        if (item === null) return;
        const action = prompt("action verb:", "blend") ?? "";
        const prereqRaw = prompt("prerequisites, comma separated (name or name:state):", "") ?? "";
        const outcomeRaw = prompt("outcome objects, comma separated:", "") ?? "";
        const goal = prompt("facilitated goal (optional):", "") ?? "";
        const parse = (raw: string): TermRef[] =>
            raw.split(",").map((t) => t.trim()).filter(Boolean).map((t) => {
                const [name, state] = t.split(":").map((s) => s.trim());
                return state ? { name, state } : { name };
            });
        const draft: PoagDoc = {
            item,
            action,
            prerequisites: parse(prereqRaw).map((t): PrereqRef => ({ kind: "object-present", ...t })),
            outcome: parse(outcomeRaw),
            ...(goal.trim() ? { goal } : {}),
        };
        this.act(() => {
            this.draft.definePoag(draft);
        });
    }

    /** Compose a new item from predefined geometric forms; the recipe is
     *  stored opaquely and round-trips through the server untouched. */
    private customItemDialog() {
        const name = prompt("custom item name (e.g. moldy bread):");
        if (!name) return;
        const parent = prompt("derives from (existing type, optional):", "") ?? "";
        const recipeRaw = prompt("shapes, comma separated as form/transform (e.g. cube/scale:0.5):", "") ?? "";
        const recipe = recipeRaw.split(",").map((r) => r.trim()).filter(Boolean).map((r) => {
            const [shape, transform] = r.split("/").map((s) => s.trim());
            return { shape: shape || "cube", transform: transform || "none" };
        });
        this.act(() => {
            this.draft.defineCustomType(name, parent.trim() || null, recipe);
        });
    }

    async save() {
        const problems = this.draft.validate();
        if (problems.length) {
            this.say(`not saved: ${problems.join("; ")}`, true);
            return;
        }
        try {
            const scene = await this.api.putScene(this.draft.toSceneDoc());
            if (this.draft.actions.length) {
                await this.api.postSession(this.draft.toSessionDoc("editor"));
            }
            this.draft.dirty = false;
            this.say(`saved scene ${scene.id} (+ session with ${this.draft.actions.length} actions)`);
        } catch (error) {
            this.say(`server rejected the save: ${error}`, true);
        }
    }

    async load(sceneId: string) {
        if (!sceneId) return;
        try {
            const doc = await this.api.getScene(sceneId);
            this.draft = EditorDraft.fromSceneDoc(doc);
            this.renderGrid();
            this.say(`loaded ${sceneId}`);
        } catch (error) {
            this.say(`load failed: ${error}`, true);
        }
    }
}
