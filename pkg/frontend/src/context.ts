import type { Api } from "./api.js";
import type { SessionState } from "./state.js";

export interface AppContext {
  api: Api;
  state: SessionState;
  root: HTMLElement;
  navigate(hash: string): Promise<void>;
  rerender(): Promise<void>;
  flash(message: string, isError?: boolean): void;
}

export function describeError(err: unknown): string {
  const e = err as { code?: string; message?: string };
  if (e && e.code) return `[${e.code}] ${e.message ?? ""}`;
  return String(err);
}
