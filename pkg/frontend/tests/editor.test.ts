// Editor round-trip: build a 10x10 scene with one rule through the DOM,
// save it, reload it, and require the serialized scene JSON to be equal.
// Also: invalid drafts must fail client-side with zero network calls.

import { beforeEach, describe, expect, it, vi } from "vitest";

import type { Api } from "../src/api.js";
import { EditorDraft } from "../src/editor.js";
import { EditorPanel } from "../src/editor_panel.js";
import type { SceneDoc, SessionDoc } from "../src/types.js";

class FakeApi {
    scenes = new Map<string, SceneDoc>();
    sessions: SessionDoc[] = [];
    calls = 0;

    async putScene(doc: SceneDoc) {
        this.calls++;
        this.scenes.set(doc.id, JSON.parse(JSON.stringify(doc)));
        return { id: doc.id };
    }

    async getScene(id: string) {
        const doc = this.scenes.get(id);
        if (!doc) throw new Error(`unknown scene ${id}`);
        return JSON.parse(JSON.stringify(doc));
    }

    async postSession(doc: SessionDoc) {
        this.calls++;
        this.sessions.push(JSON.parse(JSON.stringify(doc)));
        return { id: doc.id };
    }
}

function cellAt(root: HTMLElement, x: number, y: number): HTMLElement {
    const cell = root.querySelector<HTMLElement>(
        `.editor-grid .cell[data-x="${x}"][data-y="${y}"]`,
    );
    if (!cell) throw new Error(`no cell (${x}, ${y})`);
    return cell;
}

function toolButton(root: HTMLElement, label: string): HTMLElement {
    const button = [...root.querySelectorAll<HTMLElement>("button.tool")].find(
        (b) => b.textContent === label,
    );
    if (!button) throw new Error(`no tool ${label}`);
    return button;
}

describe("editor round-trip", () => {
    let api: FakeApi;
    let panel: EditorPanel;

    beforeEach(() => {
        document.body.innerHTML = "";
        api = new FakeApi();
        panel = new EditorPanel(api as unknown as Api, 10, 10);
        panel.draft.id = "roundtrip";
        document.body.append(panel.root);
    });

    it("creates a 10x10 scene with one rule, saves, reloads equal", async () => {
        // paint a little wall
        toolButton(panel.root, "wall").click();
        cellAt(panel.root, 4, 4).click();
        cellAt(panel.root, 4, 5).click();

        // portals (entry pins the start position)
        toolButton(panel.root, "entry").click();
        cellAt(panel.root, 1, 1).click();
        toolButton(panel.root, "exit").click();
        cellAt(panel.root, 8, 8).click();

        // an object and a zombie
        const typeInput = panel.root.querySelector<HTMLInputElement>("input[placeholder^='object type']")!;
        typeInput.value = "blender";
        toolButton(panel.root, "object").click();
        cellAt(panel.root, 2, 2).click();
        toolButton(panel.root, "zombie spawn").click();
        cellAt(panel.root, 7, 2).click();

        // the combination rule, via the dialog (prompts scripted)
        const answers = ["blender", "blend", "orange", "orange juice", "quench thirst"];
        vi.stubGlobal("prompt", () => answers.shift() ?? "");
        [...panel.root.querySelectorAll<HTMLElement>("button")]
            .find((b) => b.textContent === "define rule…")!
            .click();
        vi.unstubAllGlobals();

        expect(panel.draft.knowledge.poags).toHaveLength(1);
        expect(panel.draft.knowledge.poags[0]).toMatchObject({
            item: "blender",
            action: "blend",
            prerequisites: [{ kind: "object-present", name: "orange" }],
            outcome: [{ name: "orange juice" }],
            goal: "quench thirst",
        });

        await panel.save();
        expect(api.scenes.has("roundtrip")).toBe(true);
        const saved = api.scenes.get("roundtrip")!;
        expect(saved.width).toBe(10);
        expect(saved.start_position).toEqual([1, 1]);

        // the uploaded session mirrors every edit that happened on screen
        expect(api.sessions).toHaveLength(1);
        const kinds = api.sessions[0].actions.map((a) => a.kind);
        expect(kinds).toContain("define-poag");
        expect(kinds).toContain("place-object");
        expect(kinds.filter((k) => k === "place-portal")).toHaveLength(2);
        expect(api.sessions[0].actions.map((a) => a.seq)).toEqual(
            api.sessions[0].actions.map((_, i) => i + 1),
        );

        // reload into a fresh editor: the scene JSON must be identical
        await panel.load("roundtrip");
        expect(panel.draft.toSceneDoc()).toEqual(saved);

        // and a second save round-trips byte-for-byte
        await panel.save();
        expect(api.scenes.get("roundtrip")).toEqual(saved);
    });

    it("refuses to save without an entry portal, with no network call", async () => {
        toolButton(panel.root, "exit").click();
        cellAt(panel.root, 8, 8).click();
        await panel.save();
        expect(api.calls).toBe(0);
        const status = panel.root.querySelector(".status")!;
        expect(status.classList.contains("error")).toBe(true);
        expect(status.textContent).toContain("entry");
    });
});

describe("editor draft rules", () => {
    it("enforces floor-only placement and bounds", () => {
        const draft = new EditorDraft("d", "d", 5, 5);
        draft.paintTile(2, 2, "wall");
        expect(() => draft.placeObject(2, 2, "bread")).toThrow(/floor/);
        expect(() => draft.paintTile(9, 9, "wall")).toThrow(/outside/);
        expect(() => draft.placePortal("entry", 2, 2)).toThrow(/floor/);
    });

    it("keeps the entry portal unique and pins the start to it", () => {
        const draft = new EditorDraft("d", "d", 5, 5);
        draft.placePortal("entry", 1, 1);
        expect(draft.startPosition).toEqual([1, 1]);
        expect(() => draft.placePortal("entry", 3, 3)).toThrow(/entry/);
    });

    it("rejects rules without item or action", () => {
        const draft = new EditorDraft("d", "d", 5, 5);
        expect(() =>
            draft.definePoag({ item: " ", action: "blend", prerequisites: [], outcome: [] }),
        ).toThrow(/item and an action/);
        expect(() =>
            draft.definePoag({ item: "blender", action: "", prerequisites: [], outcome: [] }),
        ).toThrow(/item and an action/);
    });

    it("refuses painting a wall under an entity", () => {
        const draft = new EditorDraft("d", "d", 5, 5);
        draft.placeObject(2, 2, "bread");
        expect(() => draft.paintTile(2, 2, "wall")).toThrow(/entity/);
    });
});
