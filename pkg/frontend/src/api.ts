// Thin typed client over the server routes. No game logic lives here:
// the client renders whatever state the server reveals, nothing more.

import type { CommandDoc, SceneDoc, SessionDoc, StateView, StepResponse } from "./types.js";

export class ApiError extends Error {
    constructor(public status: number, message: string) {
        super(message);
    }
}

async function request<T>(method: string, url: string, body?: unknown): Promise<T> {
    const response = await fetch(url, {
        method,
        headers: body !== undefined ? { "content-type": "application/json" } : undefined,
        body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const text = await response.text();
    const data = text ? JSON.parse(text) : null;
    if (!response.ok) {
        const detail = data && (data.error ?? data.detail);
        throw new ApiError(response.status, detail ? String(detail) : response.statusText);
    }
    return data as T;
}

export class Api {
    constructor(private base: string = "") {}

    putScene(doc: SceneDoc): Promise<{ id: string }> {
        return request("PUT", `${this.base}/api/scenes/${encodeURIComponent(doc.id)}`, doc);
    }

    getScene(id: string): Promise<SceneDoc> {
        return request("GET", `${this.base}/api/scenes/${encodeURIComponent(id)}`);
    }

    postSession(doc: SessionDoc): Promise<{ id: string }> {
        return request("POST", `${this.base}/api/sessions`, doc);
    }

    createGame(scene: string, seed: number): Promise<{ id: string; state: StateView }> {
        return request("POST", `${this.base}/api/games`, { scene, seed });
    }

    getGame(id: string): Promise<{ state: StateView }> {
        return request("GET", `${this.base}/api/games/${encodeURIComponent(id)}`);
    }

    step(gameId: string, command: CommandDoc): Promise<StepResponse> {
        return request("POST", `${this.base}/api/games/${encodeURIComponent(gameId)}/step`, {
            command,
        });
    }
}
