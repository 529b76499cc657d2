// Wire types for the server JSON API (docs/api.md, docs/scene-format.md).

export type TileChar = "." | "#" | " " | "?";

export interface PortalDoc {
    kind: "entry" | "exit";
    pos: [number, number];
    target?: string;
}

export interface TermRef {
    name: string;
    state?: string;
}

export interface PrereqRef extends TermRef {
    kind?: "object-present" | "state-holds" | "action-done";
}

export interface PoagDoc {
    id?: number;
    item: string;
    action: string;
    prerequisites: PrereqRef[];
    outcome: TermRef[];
    goal?: string;
}

export interface TypeDoc {
    name: string;
    parent?: string;
    custom?: boolean;
    recipe?: { shape: string; transform: string }[];
}

export interface KnowledgeDoc {
    types: TypeDoc[];
    actions: string[];
    goals: string[];
    poags: PoagDoc[];
}

export interface InstanceDoc {
    id: number;
    type: string;
    pos: [number, number];
    states?: string[];
    overrides?: Record<string, PoagDoc | null>;
}

export interface SceneDoc {
    id: string;
    name: string;
    width: number;
    height: number;
    tiles: string[];
    portals: PortalDoc[];
    monster_spawns: [number, number][];
    goals: string[];
    start_position: [number, number] | null;
    instances: InstanceDoc[];
    knowledge?: KnowledgeDoc;
}

export interface SessionActionDoc {
    seq: number;
    kind: string;
    payload: Record<string, unknown>;
}

export interface SessionDoc {
    format: "gecka3d-1";
    id: string;
    designer: string;
    timestamp: string;
    scenes: string[];
    actions: SessionActionDoc[];
}

// -- player mode ------------------------------------------------------------

export interface ItemView {
    id: number;
    type: string;
    pos: [number, number];
    states: string[];
}

export interface InventoryView {
    id: number;
    type: string;
    states: string[];
}

export interface StateView {
    scene: string;
    width: number;
    height: number;
    tiles: string[]; // '?' where unrevealed
    position: [number, number];
    health: number;
    status: "running" | "won" | "lost";
    turn: number;
    inventory: InventoryView[];
    items: ItemView[];
    zombies: { id: number; pos: [number, number] }[];
    portals: PortalDoc[];
    goals: { goal: string; done: boolean }[];
}

export type CommandDoc =
    | { kind: "move-to"; x: number; y: number }
    | { kind: "interact"; instance: number; action: string }
    | { kind: "combine"; item: number; action: string; ingredients: number[] }
    | { kind: "use-portal" }
    | { kind: "wait" };

export interface EventDoc {
    turn: number;
    kind: string;
    payload: Record<string, unknown>;
}

export interface StepResponse {
    state: StateView;
    events: EventDoc[];
}
