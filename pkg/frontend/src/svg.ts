const ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
};

export function esc(text: string): string {
  return text.replace(/[&<>"]/g, (ch) => ESCAPES[ch]);
}

export function px(value: number): string {
  return value.toFixed(2);
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const attrText = Object.entries(attrs)
    .map(([key, value]) => ` ${key}="${typeof value === "number" ? px(value) : value}"`)
    .join("");
  if (children.length === 0 && text === undefined) {
    return `<${name}${attrText}/>`;
  }
  const body = text !== undefined ? esc(text) : children.join("");
  return `<${name}${attrText}>${body}</${name}>`;
}

export interface Scale {
  (value: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0;
  return (value) => r0 + ((value - d0) / span) * (r1 - r0);
}
