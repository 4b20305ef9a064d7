// Batch validator: prints one "1"/"0" line per input file, in order.
// Usage: node validate.js file1.wasm file2.wasm ...
//        node validate.js --list manifest.txt   (one path per line)
"use strict";
const fs = require("fs");

let files = process.argv.slice(2);
if (files[0] === "--list") {
  files = fs.readFileSync(files[1], "utf8").split("\n").filter(Boolean);
}
const out = [];
for (const f of files) {
  let ok = false;
  try {
    ok = WebAssembly.validate(fs.readFileSync(f));
  } catch (e) {
    ok = false;
  }
  out.push(ok ? "1" : "0");
}
process.stdout.write(out.join("\n") + "\n");
