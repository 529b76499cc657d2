// Small shared helpers.

// Mirror of the server's term normalization: strip markup, lowercase,
// collapse whitespace. Keeping it identical avoids save-time surprises.
export function normalizeTerm(text: string): string {
    return text
        .replace(/<[^>]*>/g, " ")
        .toLowerCase()
        .replace(/\s+/g, " ")
        .trim();
}

export function nowIso(): string {
    return new Date().toISOString().replace(/\.\d+Z$/, "Z");
}

// Tiny DOM builder: el("button.tool", {title: "wall"}, "#")
export function el<K extends keyof HTMLElementTagNameMap>(
    spec: string,
    attrs: Record<string, string> = {},
    ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
    const [tag, ...classes] = spec.split(".");
    const node = document.createElement(tag || "div") as HTMLElementTagNameMap[K];
    if (classes.length) node.className = classes.join(" ");
    for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
    node.append(...children);
    return node;
}
