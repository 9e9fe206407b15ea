// Session rendering. A turn is appended only after a successful analyze
// response, and shows exactly what the server sent: six probability bars,
// the notification, up to three suggestion cards, and a play control wired
// to the server's audio reference.

import { AnalyzeResponse, ApiClient } from "./api.js";

export const EMOTION_ORDER = [
  "anger",
  "fear",
  "sadness",
  "happiness",
  "surprise",
  "neutrality",
] as const;

export class SessionView {
  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  appendTurn(response: AnalyzeResponse, clipSeconds: number): HTMLElement {
    const turn = document.createElement("section");
    turn.className = "turn";

    const meta = document.createElement("div");
    meta.className = "turn-meta";
    meta.textContent = `clip ${clipSeconds.toFixed(1)} s · top emotion: ${response.top_emotion}`;
    turn.appendChild(meta);

    turn.appendChild(this.renderBars(response.distribution));

    if (response.negative) {
      if (response.notification_text) {
        const note = document.createElement("p");
        note.className = "notification";
        note.textContent = response.notification_text;
        turn.appendChild(note);
      }
      const list = document.createElement("ul");
      list.className = "suggestions";
      for (const item of response.recommendations) {
        const card = document.createElement("li");
        card.className = "suggestion-card";
        card.textContent = item.text;
        card.dataset.id = item.id;
        list.appendChild(card);
      }
      turn.appendChild(list);
      if (response.audio_ref) {
        turn.appendChild(this.renderPlayButton(response.audio_ref, turn));
      }
      if (response.warning) {
        const warning = document.createElement("p");
        warning.className = "warning";
        warning.textContent = response.warning;
        turn.appendChild(warning);
      }
    } else {
      const calm = document.createElement("p");
      calm.className = "no-negative";
      calm.textContent = "No negative emotion detected.";
      turn.appendChild(calm);
    }

    this.root.appendChild(turn); // submission order
    return turn;
  }

  appendError(message: string, retry?: () => void): HTMLElement {
    const box = document.createElement("section");
    box.className = "turn turn-error";
    const text = document.createElement("p");
    text.className = "error-text";
    text.textContent = message;
    box.appendChild(text);
    if (retry) {
      const button = document.createElement("button");
      button.className = "retry";
      button.textContent = "Retry";
      button.addEventListener("click", retry);
      box.appendChild(button);
    }
    this.root.appendChild(box);
    return box;
  }

  private renderBars(distribution: Record<string, number>): HTMLElement {
    const bars = document.createElement("div");
    bars.className = "bars";
    for (const emotion of EMOTION_ORDER) {
      const probability = distribution[emotion] ?? 0;
      const row = document.createElement("div");
      row.className = "bar-row";

      const label = document.createElement("span");
      label.className = "bar-label";
      label.textContent = emotion;

      const track = document.createElement("div");
      track.className = "bar-track";
      const fill = document.createElement("div");
      fill.className = "bar-fill";
      fill.style.width = `${(probability * 100).toFixed(1)}%`;
      track.appendChild(fill);

      const value = document.createElement("span");
      value.className = "bar-value";
      value.textContent = probability.toFixed(3);

      row.append(label, track, value);
      bars.appendChild(row);
    }
    return bars;
  }

  private renderPlayButton(audioRef: string, turn: HTMLElement): HTMLElement {
    const button = document.createElement("button");
    button.className = "play";
    button.textContent = "Play spoken response";
    button.addEventListener("click", async () => {
      try {
        const wav = await this.api.fetchAudio(audioRef);
        const url = URL.createObjectURL(wav);
        const audio = new Audio(url);
        audio.addEventListener("ended", () => URL.revokeObjectURL(url));
        await audio.play(); // replay allowed; the server clip is immutable
      } catch (error) {
        const note = document.createElement("p");
        note.className = "audio-expired";
        note.textContent = error instanceof Error ? error.message : "audio unavailable";
        turn.appendChild(note); // suggestions stay visible
      }
    });
    return button;
  }
}
