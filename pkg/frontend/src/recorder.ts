// Microphone capture and file intake. Whatever comes in, the upload leaves
// this module as PCM 16-bit mono WAV (encoded client-side).

import { downmixToMono, encodeWavPcm16 } from "./wav.js";

export class Recorder {
  private recorder: MediaRecorder | null = null;
  private chunks: Blob[] = [];
  private stream: MediaStream | null = null;

  get recording(): boolean {
    return this.recorder !== null;
  }

  async start(): Promise<void> {
    if (this.recorder) return;
    this.stream = await navigator.mediaDevices.getUserMedia({ audio: true });
    this.chunks = [];
    this.recorder = new MediaRecorder(this.stream);
    this.recorder.ondataavailable = (event) => {
      if (event.data && event.data.size > 0) this.chunks.push(event.data);
    };
    this.recorder.start();
  }

  async stop(): Promise<Blob> {
    const recorder = this.recorder;
    const stream = this.stream;
    if (!recorder) throw new Error("not recording");
    this.recorder = null;
    this.stream = null;
    const compressed: Blob = await new Promise((resolve) => {
      recorder.onstop = () => {
        stream?.getTracks().forEach((track) => track.stop());
        resolve(new Blob(this.chunks, { type: recorder.mimeType }));
      };
      recorder.stop();
    });
    return blobToWav(compressed);
  }
}

// Decode any browser-supported audio blob and re-encode as PCM16 WAV.
export async function blobToWav(blob: Blob): Promise<Blob> {
  const raw = await blob.arrayBuffer();
  const ctx = new AudioContext();
  try {
    const decoded = await ctx.decodeAudioData(raw);
    const channels: Float32Array[] = [];
    for (let c = 0; c < decoded.numberOfChannels; c++) {
      channels.push(decoded.getChannelData(c));
    }
    return encodeWavPcm16(downmixToMono(channels), decoded.sampleRate);
  } finally {
    void ctx.close();
  }
}
