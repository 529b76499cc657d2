// Player mode: a thin client over the server's game endpoints. The server
// masks everything outside the revealed set; this view additionally never
// creates DOM for a masked tile, so fog integrity holds end to end: no
// node in the document corresponds to an unrevealed coordinate.

import type { Api } from "./api.js";
import type { EventDoc, StateView } from "./types.js";
import { el } from "./util.js";

export interface PlayerCallbacks {
    onMessage(text: string): void;
    onState(view: StateView): void;
}

export class PlayerController {
    gameId: string | null = null;
    view: StateView | null = null;
    selectedItem: number | null = null;
    private clickSeq = 0;
    private stepping = false;

    constructor(private api: Api, private callbacks: PlayerCallbacks) {}

    async createGame(scene: string, seed: number) {
        const created = await this.api.createGame(scene, seed);
        this.gameId = created.id;
        this.update(created.state);
        this.callbacks.onMessage(`game ${created.id} started on ${scene} (seed ${seed})`);
    }

    private update(view: StateView) {
        this.view = view;
        this.callbacks.onState(view);
    }

    private report(events: EventDoc[]) {
        for (const e of events) {
            if (e.kind === "zombie-move" || e.kind === "move") continue;
            this.callbacks.onMessage(`turn ${e.turn}: ${e.kind} ${JSON.stringify(e.payload)}`);
        }
    }

    /** Click-to-move: keep stepping toward the target until the path is
     *  exhausted, something eventful happens, or the player clicks again.
     *  At most one request is in flight per game. */
    async clickTile(x: number, y: number) {
        if (!this.gameId || !this.view || this.view.status !== "running") return;
        const mySeq = ++this.clickSeq;
        if (this.stepping) return; // the active loop will notice clickSeq changed
        this.stepping = true;
        try {
            while (this.clickSeq === mySeq) {
                const response = await this.api.step(this.gameId, { kind: "move-to", x, y });
                this.update(response.state);
                this.report(response.events);
                const [px, py] = response.state.position;
                const eventful = response.events.some((e) =>
                    ["damage", "no-path", "won", "lost", "portal-blocked"].includes(e.kind),
                );
                if ((px === x && py === y) || eventful || response.state.status !== "running") {
                    break;
                }
            }
        } finally {
            this.stepping = false;
        }
    }

    async interact(instance: number, action: string) {
        if (!this.gameId || this.stepping) return;
        this.stepping = true;
        try {
            const response = await this.api.step(this.gameId, { kind: "interact", instance, action });
            this.update(response.state);
            this.report(response.events);
        } finally {
            this.stepping = false;
        }
    }

    async combine(item: number, action: string, ingredients: number[]) {
        if (!this.gameId || this.stepping) return;
        this.stepping = true;
        try {
            const response = await this.api.step(this.gameId, {
                kind: "combine", item, action, ingredients,
            });
            this.update(response.state);
            this.report(response.events);
        } finally {
            this.stepping = false;
        }
    }

    async simple(kind: "use-portal" | "wait") {
        if (!this.gameId || this.stepping) return;
        this.stepping = true;
        try {
            const response = await this.api.step(this.gameId, { kind });
            this.update(response.state);
            this.report(response.events);
        } finally {
            this.stepping = false;
        }
    }
}

// ---- rendering --------------------------------------------------------------

export interface Cell {
    x: number;
    y: number;
    tile: string; // '.', '#', ' ' — never '?'
}

/** The revealed cells of a view; masked coordinates are simply absent. */
export function visibleCells(view: StateView): Cell[] {
    const cells: Cell[] = [];
    for (let y = 0; y < view.height; y++) {
        const row = view.tiles[y];
        for (let x = 0; x < view.width; x++) {
            const tile = row[x];
            if (tile !== "?") cells.push({ x, y, tile });
        }
    }
    return cells;
}

const TILE_CLASS: Record<string, string> = { ".": "floor", "#": "wall", " ": "void" };

/** Build the grid DOM for a view. Only revealed cells get elements. */
export function renderGrid(
    view: StateView,
    onClick?: (x: number, y: number) => void,
): HTMLElement {
    const grid = el("div.grid.player-grid");
    grid.style.setProperty("--cols", String(view.width));
    grid.style.setProperty("--rows", String(view.height));

    const items = new Map(view.items.map((i) => [`${i.pos[0]},${i.pos[1]}`, i]));
    const zombies = new Map(view.zombies.map((z) => [`${z.pos[0]},${z.pos[1]}`, z]));
    const portals = new Map(view.portals.map((p) => [`${p.pos[0]},${p.pos[1]}`, p]));

    for (const cell of visibleCells(view)) {
        const node = el("div.cell." + (TILE_CLASS[cell.tile] ?? "void"), {
            "data-x": String(cell.x),
            "data-y": String(cell.y),
        });
        node.style.gridColumn = String(cell.x + 1);
        node.style.gridRow = String(cell.y + 1);
        const key = `${cell.x},${cell.y}`;
        const portal = portals.get(key);
        if (portal) {
            node.classList.add(`portal-${portal.kind}`);
            node.title = portal.kind + (portal.target ? ` -> ${portal.target}` : "");
        }
        const item = items.get(key);
        if (item) {
            node.classList.add("item");
            node.title = item.type;
            node.append(el("span.glyph", {}, "▣"));
            node.dataset.instance = String(item.id);
        }
        const zombie = zombies.get(key);
        if (zombie) {
            node.classList.add("zombie");
            node.append(el("span.glyph", {}, "Z"));
        }
        if (view.position[0] === cell.x && view.position[1] === cell.y) {
            node.classList.add("character");
            node.append(el("span.glyph", {}, "@"));
        }
        if (onClick) node.addEventListener("click", () => onClick(cell.x, cell.y));
        grid.append(node);
    }
    return grid;
}
