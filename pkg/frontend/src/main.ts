// Page wiring: language selector (query parameter + text direction), record
// and upload inputs, one in-flight request at a time.

import { ApiClient, Language } from "./api.js";
import { Recorder, blobToWav } from "./recorder.js";
import { SessionView } from "./view.js";

declare global {
  interface Window {
    EMPATH_BASE_URL?: string;
  }
}

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

const api = new ApiClient(window.EMPATH_BASE_URL ?? "");
const view = new SessionView(byId("turns"), api);
const recorder = new Recorder();

const languageSelect = byId<HTMLSelectElement>("language");
const recordButton = byId<HTMLButtonElement>("record");
const fileInput = byId<HTMLInputElement>("upload");
const statusLine = byId<HTMLElement>("status");

let busy = false;

function language(): Language {
  return languageSelect.value === "fa" ? "fa" : "en";
}

languageSelect.addEventListener("change", () => {
  document.documentElement.dir = language() === "fa" ? "rtl" : "ltr";
});

function setBusy(value: boolean) {
  busy = value;
  recordButton.disabled = value && !recorder.recording;
  fileInput.disabled = value;
  statusLine.textContent = value ? "analyzing…" : "";
}

async function submit(wav: Blob, clipSeconds: number) {
  if (busy) return;
  setBusy(true);
  try {
    const response = await api.analyze(wav, language());
    view.appendTurn(response, clipSeconds);
  } catch (error) {
    const message = error instanceof Error ? error.message : "request failed";
    view.appendError(message, () => void submit(wav, clipSeconds));
  } finally {
    setBusy(false);
  }
}

recordButton.addEventListener("click", async () => {
  if (recorder.recording) {
    recordButton.textContent = "Record";
    const started = Number(recordButton.dataset.startedAt ?? Date.now());
    try {
      const wav = await recorder.stop();
      await submit(wav, (Date.now() - started) / 1000);
    } catch (error) {
      view.appendError(error instanceof Error ? error.message : "recording failed");
    }
  } else {
    if (busy) return;
    try {
      await recorder.start();
      recordButton.dataset.startedAt = String(Date.now());
      recordButton.textContent = "Stop";
    } catch {
      view.appendError("microphone unavailable; upload a WAV file instead");
    }
  }
});

fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  fileInput.value = "";
  if (!file) return;
  try {
    const wav = await blobToWav(file);
    await submit(wav, 0);
  } catch {
    view.appendError(`could not decode ${file.name}`);
  }
});
