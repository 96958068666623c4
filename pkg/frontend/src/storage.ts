/**
 * Session autosave keyed by video identity.
 *
 * The store is injectable (any localStorage-shaped object) so tests run
 * without a browser.  Persisted payloads are versioned; anything
 * unreadable or from a different version is treated as absent rather
 * than crashing the UI.
 */

import type { SessionState } from "./session.js";

/** The subset of the Web Storage API the autosaver needs. */
export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

const PAYLOAD_VERSION = 1;
const KEY_PREFIX = "gaitscope-annotator:session:";

export function autosaveKey(videoId: string): string {
  return KEY_PREFIX + videoId;
}

export function saveSession(store: KeyValueStore, state: SessionState): void {
  const payload = { payloadVersion: PAYLOAD_VERSION, state };
  store.setItem(autosaveKey(state.videoId), JSON.stringify(payload));
}

export function loadSession(
  store: KeyValueStore,
  videoId: string
): SessionState | null {
  const raw = store.getItem(autosaveKey(videoId));
  if (raw === null) return null;
  try {
    const payload = JSON.parse(raw) as {
      payloadVersion?: number;
      state?: SessionState;
    };
    if (payload.payloadVersion !== PAYLOAD_VERSION || payload.state == null) {
      return null;
    }
    if (payload.state.videoId !== videoId) return null;
    return payload.state;
  } catch {
    return null;
  }
}

export function clearSession(store: KeyValueStore, videoId: string): void {
  store.removeItem(autosaveKey(videoId));
}
