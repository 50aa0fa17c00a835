import { NavigatorClient } from "./client";
import { keymapHelp } from "./keymap";
import { LiveRegionAnnouncer } from "./live-region";
import { HtmlAudioSink } from "./player";
import type { Audience } from "./types";

function required(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing #${id}`);
  }
  return el;
}

async function start(): Promise<void> {
  const audienceSelect = required("audience") as HTMLSelectElement;
  const connectButton = required("connect") as HTMLButtonElement;
  const breadcrumbEl = required("breadcrumb");
  const helpEl = required("keymap-help");
  const captionEl = required("caption");

  const announcer = new LiveRegionAnnouncer(captionEl);
  let client: NavigatorClient | null = null;

  connectButton.addEventListener("click", async () => {
    const audience = audienceSelect.value as Audience;
    helpEl.innerHTML = keymapHelp(audience)
      .map((line) => `<li>${line}</li>`)
      .join("");
    try {
      client = await NavigatorClient.connect({
        baseUrl: window.location.origin,
        audience,
        sink: new HtmlAudioSink(),
        announcer,
      });
    } catch {
      return; // connect() already announced the failure
    }
    breadcrumbEl.textContent = client.state.breadcrumb;
    connectButton.disabled = true;
    audienceSelect.disabled = true;
  });

  document.addEventListener("keydown", async (event) => {
    if (!client || event.altKey || event.ctrlKey || event.metaKey) {
      return;
    }
    const handled = await client.handleKey(event.key);
    if (handled !== null) {
      event.preventDefault();
      breadcrumbEl.textContent = client.state.breadcrumb;
    }
  });
}

document.addEventListener("DOMContentLoaded", () => {
  void start();
});
