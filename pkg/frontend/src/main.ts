// App shell: two tabs (editor / player) over the same API client.

import { Api } from "./api.js";
import { EditorPanel } from "./editor_panel.js";
import { PlayerController, renderGrid } from "./player.js";
import type { StateView } from "./types.js";
import { el } from "./util.js";

function playerTab(api: Api): HTMLElement {
    const gridHost = el("div.grid-host");
    const log = el("div.log");
    const statusBar = el("div.status");
    const inventory = el("div.inventory");
    const goals = el("div.goals");
    let isometric = true;

    const controller = new PlayerController(api, {
        onMessage(text) {
            log.prepend(el("div.entry", {}, text));
            while (log.childElementCount > 40) log.lastElementChild?.remove();
        },
        onState(view) {
            paint(view);
        },
    });

    function paint(view: StateView) {
        const grid = renderGrid(view, (x, y) => void controller.clickTile(x, y));
        grid.classList.toggle("isometric", isometric);
        gridHost.replaceChildren(grid);
        statusBar.textContent =
            `${view.scene} · turn ${view.turn} · health ${"♥".repeat(Math.max(view.health, 0))} · ${view.status}`;
        if (view.status === "won") {
            statusBar.textContent += ` — victory! goals: ${view.goals.map((g) => g.goal).join(", ")}`;
        }
        inventory.replaceChildren(
            el("b", {}, "inventory: "),
            ...view.inventory.map((item) => {
                const button = el<"button">("button.chip", {}, `${item.type} #${item.id}`);
                button.addEventListener("click", () => {
                    controller.selectedItem = item.id;
                    inventory.querySelectorAll("button").forEach((b) => b.classList.remove("active"));
                    button.classList.add("active");
                });
                return button;
            }),
        );
        goals.replaceChildren(
            el("b", {}, "goals: "),
            ...view.goals.map((g) => el("span.chip." + (g.done ? "done" : "open"), {},
                `${g.done ? "✓" : "•"} ${g.goal}`)),
        );
    }

    const sceneInput = el<"input">("input", { placeholder: "scene id", value: "" });
    const seedInput = el<"input">("input", { value: "7", size: "6" });
    const startButton = el<"button">("button.primary", {}, "start game");
    startButton.addEventListener("click", () => {
        void controller.createGame(sceneInput.value.trim(), Number(seedInput.value) || 0)
            .catch((error) => log.prepend(el("div.entry.error", {}, String(error))));
    });

    const actionInput = el<"input">("input", { placeholder: "verb (e.g. blend)", size: "10" });
    const interactButton = el<"button">("button", {}, "interact with selected");
    interactButton.addEventListener("click", () => {
        if (controller.selectedItem !== null && actionInput.value.trim()) {
            void controller.interact(controller.selectedItem, actionInput.value.trim());
        }
    });
    const waitButton = el<"button">("button", {}, "wait");
    waitButton.addEventListener("click", () => void controller.simple("wait"));
    const portalButton = el<"button">("button", {}, "use portal");
    portalButton.addEventListener("click", () => void controller.simple("use-portal"));
    const viewToggle = el<"button">("button", {}, "2.5D / flat");
    viewToggle.addEventListener("click", () => {
        isometric = !isometric;
        if (controller.view) paint(controller.view);
    });

    return el(
        "div.player",
        {},
        el("div.row", {}, sceneInput, seedInput, startButton, viewToggle),
        statusBar,
        gridHost,
        el("div.row", {}, actionInput, interactButton, waitButton, portalButton),
        inventory,
        goals,
        log,
    );
}

export function mount(root: HTMLElement) {
    const api = new Api("");
    const editor = new EditorPanel(api);
    const player = playerTab(api);
    player.style.display = "none";

    const tabs = el("div.tabs");
    const make = (label: string, panel: HTMLElement, other: HTMLElement) => {
        const button = el<"button">("button.tab", {}, label);
        button.addEventListener("click", () => {
            panel.style.display = "";
            other.style.display = "none";
            tabs.querySelectorAll("button").forEach((b) => b.classList.remove("active"));
            button.classList.add("active");
        });
        return button;
    };
    const editorTab = make("editor", editor.root, player);
    const playTab = make("player", player, editor.root);
    editorTab.classList.add("active");
    tabs.append(editorTab, playTab);

    root.append(el("h1", {}, "gecka"), tabs, editor.root, player);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
    mount(document.getElementById("app")!);
}
