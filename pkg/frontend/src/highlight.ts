// Minimal Java syntax highlighting: wraps keywords, strings, and comments
// in classed spans inside a <pre>.

const KEYWORDS = new Set([
  "abstract", "boolean", "break", "byte", "case", "catch", "char", "class",
  "continue", "default", "do", "double", "else", "enum", "extends", "final",
  "finally", "float", "for", "if", "implements", "import", "instanceof",
  "int", "interface", "long", "native", "new", "null", "package", "private",
  "protected", "public", "return", "short", "static", "super", "switch",
  "synchronized", "this", "throw", "throws", "transient", "try", "void",
  "volatile", "while", "true", "false",
]);

const TOKEN = /(\/\/[^\n]*|\/\*[\s\S]*?\*\/)|("(?:[^"\\]|\\.)*")|([A-Za-z_$][A-Za-z0-9_$]*)|(\d[\w.]*)|([\s\S])/g;

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;");
}

export function highlightJava(source: string): string {
  let out = "";
  for (const match of source.matchAll(TOKEN)) {
    const [, comment, str, word, num, other] = match;
    if (comment !== undefined) out += `<span class="tok-comment">${escapeHtml(comment)}</span>`;
    else if (str !== undefined) out += `<span class="tok-string">${escapeHtml(str)}</span>`;
    else if (word !== undefined) {
      const cls = KEYWORDS.has(word) ? "tok-keyword" : "tok-ident";
      out += `<span class="${cls}">${escapeHtml(word)}</span>`;
    } else if (num !== undefined) out += `<span class="tok-number">${escapeHtml(num)}</span>`;
    else out += escapeHtml(other ?? "");
  }
  return out;
}

export function codeBlock(source: string): HTMLElement {
  const pre = document.createElement("pre");
  pre.className = "code";
  pre.innerHTML = highlightJava(source);
  return pre;
}
