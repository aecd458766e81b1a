import { ApiClient } from "./api.js";
import { App } from "./app.js";

declare global {
  interface Window {
    COMPATKG_API_BASE?: string;
  }
}

const base = window.COMPATKG_API_BASE ?? "http://127.0.0.1:8571";
const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app container");
}
void new App(root, new ApiClient(base)).init();
