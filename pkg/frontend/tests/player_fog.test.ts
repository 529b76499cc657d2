// Fog integrity: across a recorded 20-step playthrough (captured from the
// real server), the player grid must never create DOM for a tile the
// server did not reveal. The view is the only source of truth - the
// client computes no rules.

import { describe, expect, it } from "vitest";

import { renderGrid, visibleCells } from "../src/player.js";
import type { StateView } from "../src/types.js";

import fixture from "./fixtures/playthrough.json";

interface Step {
    command: Record<string, unknown>;
    state: StateView;
    events: { turn: number; kind: string }[];
}

const initial = fixture.initial as unknown as StateView;
const steps = fixture.steps as unknown as Step[];

function revealedSet(view: StateView): Set<string> {
    const out = new Set<string>();
    for (let y = 0; y < view.height; y++) {
        for (let x = 0; x < view.width; x++) {
            if (view.tiles[y][x] !== "?") out.add(`${x},${y}`);
        }
    }
    return out;
}

describe("fog-of-war rendering", () => {
    it("has a 20-step playthrough with growing revelation", () => {
        expect(steps).toHaveLength(20);
        let previous = revealedSet(initial);
        for (const step of steps) {
            const current = revealedSet(step.state);
            for (const key of previous) expect(current.has(key)).toBe(true);
            previous = current;
        }
        expect(revealedSet(steps[19].state).size).toBeGreaterThan(revealedSet(initial).size);
    });

    it("never renders a tile outside the server's revealed set", () => {
        for (const view of [initial, ...steps.map((s) => s.state)]) {
            document.body.innerHTML = "";
            const grid = renderGrid(view);
            document.body.append(grid);

            const revealed = revealedSet(view);
            const cells = document.querySelectorAll<HTMLElement>(".cell");
            // every rendered cell is revealed...
            for (const cell of cells) {
                const key = `${cell.dataset.x},${cell.dataset.y}`;
                expect(revealed.has(key)).toBe(true);
            }
            // ...and every revealed tile is rendered exactly once
            expect(cells.length).toBe(revealed.size);
            // no text anywhere in the document leaks a masked coordinate
            expect(document.querySelectorAll(".cell.character").length).toBe(1);
        }
    });

    it("renders entities only where the server put them", () => {
        for (const step of steps) {
            document.body.innerHTML = "";
            document.body.append(renderGrid(step.state));
            const zombieCells = [...document.querySelectorAll<HTMLElement>(".cell.zombie")];
            expect(zombieCells.length).toBe(step.state.zombies.length);
            for (const z of step.state.zombies) {
                const match = zombieCells.find(
                    (c) => c.dataset.x === String(z.pos[0]) && c.dataset.y === String(z.pos[1]),
                );
                expect(match).toBeDefined();
            }
            const itemCells = document.querySelectorAll(".cell.item");
            expect(itemCells.length).toBe(step.state.items.length);
        }
    });

    it("visibleCells is exactly the non-masked coordinates", () => {
        const view = steps[5].state;
        const cells = visibleCells(view);
        const fromTiles = revealedSet(view);
        expect(new Set(cells.map((c) => `${c.x},${c.y}`))).toEqual(fromTiles);
        for (const cell of cells) expect(cell.tile).not.toBe("?");
    });

    it("click handlers fire with the cell coordinates", () => {
        document.body.innerHTML = "";
        const clicks: [number, number][] = [];
        const grid = renderGrid(initial, (x, y) => clicks.push([x, y]));
        document.body.append(grid);
        const cell = document.querySelector<HTMLElement>(".cell")!;
        cell.click();
        expect(clicks).toEqual([[Number(cell.dataset.x), Number(cell.dataset.y)]]);
    });
});
