// d3 is provided as a global: by a script tag in the browser and by the
// test setup under vitest.
declare const d3: typeof import("d3");
