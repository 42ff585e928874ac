import { HttpTransport } from "./api.js";
import { App } from "./app.js";

const root = document.querySelector<HTMLElement>("#app");
if (root === null) {
  throw new Error("missing #app container");
}

const app = new App(root, new HttpTransport());
void app.start();
