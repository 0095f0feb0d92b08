import init, { cot_sum_json, dim_s4_json, enumerate_trees_json } from "./pkg/strata_wasm_demo.js";

const num = (id) => Number(document.getElementById(id).value);
const show = (id, json) => {
  document.getElementById(id).textContent = JSON.stringify(JSON.parse(json), null, 2);
};

await init();

document.getElementById("cs-run").onclick = () =>
  show("cs-out", cot_sum_json(num("cs-a"), num("cs-b"), num("cs-m")));

document.getElementById("s4-run").onclick = () =>
  show("s4-out", dim_s4_json(num("s4-p"), num("s4-q"), num("s4-k"), num("s4-m"), num("s4-mp")));

document.getElementById("bt-run").onclick = () =>
  show("bt-out", enumerate_trees_json(num("bt-k")));
