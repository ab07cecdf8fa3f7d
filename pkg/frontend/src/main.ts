/** Page bootstrap: wire the controller to the document. */

import { ApiClient } from "./api.js";
import { ReviewController } from "./controller.js";
import { renderView } from "./render.js";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app mount point");

const controller = new ReviewController(new ApiClient(), (vm) => {
  root.innerHTML = renderView(vm);
  document
    .getElementById("btn-match")
    ?.addEventListener("click", () => void controller.submit("match"));
  document
    .getElementById("btn-nonmatch")
    ?.addEventListener("click", () => void controller.submit("nonmatch"));
});

document.addEventListener("keydown", (event) => {
  if (event.repeat) return;
  controller.handleKey(event.key);
});

void controller.start();
