import init, { catalog, census_row, braces, holomorph } from "./pkg/holcensus_web.js";

const $ = (id) => document.getElementById(id);
const HEADERS = ["Types", "#HGS", "#Sbracoids", "#Gal", "#Sbraces", "AC #HGS", "AC #Sbracoids", "BC HGS"];

function call(f, ...args) {
  try {
    return { value: JSON.parse(f(...args)) };
  } catch (e) {
    return { error: String(e) };
  }
}

function table(rows, head) {
  const t = document.createElement("table");
  if (head) {
    const tr = t.insertRow();
    for (const h of head) {
      const th = document.createElement("th");
      th.textContent = h;
      tr.appendChild(th);
    }
  }
  for (const r of rows) {
    const tr = t.insertRow();
    for (const c of r) tr.insertCell().textContent = c === null ? "?" : c;
  }
  return t;
}

function showError(el, msg) {
  el.replaceChildren();
  const p = document.createElement("p");
  p.className = "err";
  p.textContent = msg;
  el.appendChild(p);
}

function showRow() {
  const out = $("row-out");
  const d = Number($("row-degree").value);
  const r = call(census_row, d);
  if (r.error) return showError(out, r.error);
  out.replaceChildren(table([[d, ...r.value.cells]], ["Degree", ...HEADERS]));
  for (const n of r.value.notes) {
    const p = document.createElement("p");
    p.textContent = n;
    out.appendChild(p);
  }
  const rows = r.value.classes.flatMap((c) =>
    c.members.map((m) => [c.label, m.type, m.class_size, m.hgs, m.almost_classical ? "yes" : "", m.bijective ? "yes" : ""]));
  if (rows.length) out.appendChild(table(rows, ["class", "type", "conjugates", "HGS", "AC", "BC"]));
}

function showBraces() {
  const out = $("brace-out");
  const r = call(braces, Number($("brace-order").value));
  if (r.error) return showError(out, r.error);
  out.replaceChildren();
  for (const b of r.value) {
    const div = document.createElement("div");
    if (b.error) {
      showError(div, `${b.type}: ${b.error}`);
      out.appendChild(div);
      continue;
    }
    const h = document.createElement("h3");
    h.textContent = `${b.type}, record ${b.record}${b.trivial ? " (trivial)" : ""}${b.involutive ? ", involutive" : ""}`;
    div.appendChild(h);
    const n = b.circle.length;
    const idx = [...Array(n).keys()];
    for (const [name, rows] of [["a + b", b.additive], ["a ∘ b", b.circle],
      ["r(x, y)", b.ybe.map((row) => row.map(([u, v]) => `${u},${v}`))]]) {
      const g = document.createElement("div");
      g.className = "grid";
      g.append(name, table(rows.map((row, i) => [i, ...row]), ["", ...idx]));
      div.appendChild(g);
    }
    out.appendChild(div);
  }
}

function fillNames() {
  const sel = $("hol-name");
  const r = call(catalog, Number($("hol-order").value));
  sel.replaceChildren();
  if (r.error) return showError($("hol-out"), r.error);
  for (const g of r.value) {
    const o = document.createElement("option");
    o.value = g.name;
    o.textContent = `${g.name} (${g.structure})`;
    sel.appendChild(o);
  }
}

function showHol() {
  const r = call(holomorph, Number($("hol-order").value), $("hol-name").value);
  $("hol-out").textContent = r.error ?? JSON.stringify(r.value, null, 2);
}

await init();
$("row-go").onclick = showRow;
$("brace-go").onclick = showBraces;
$("hol-go").onclick = showHol;
$("hol-order").onchange = fillNames;
fillNames();
