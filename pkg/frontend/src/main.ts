/** Browser entry point: enhance the served shell once the DOM is ready. */

import { ApiClient } from "./api.js";
import { App } from "./controller.js";
import type { EventSourceLike } from "./stream.js";

function boot(): void {
  const api = new ApiClient({ baseUrl: "" });
  const app = new App(document, api, {
    // MessageEvent carries more than { data }, which is all the app reads
    esFactory: (url) => new EventSource(url) as unknown as EventSourceLike,
  });
  void app.init();
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}
