/**
 * Per-tab session: the unlock token and the unlocked bookcase view live
 * here in memory only — never in localStorage/sessionStorage, so closing
 * the page forgets the key material.
 */

import type { BookcaseView, ContentHit, SearchHit } from "./api.js";

export class SessionState {
  private token: string | null = null;
  bookcase: BookcaseView | null = null;
  lastSearch: { q: string; output: string; hits: SearchHit[] } | null = null;
  lastContent: { q: string; hits: ContentHit[] } | null = null;
  selectedDocs: Set<number> = new Set();

  get unlocked(): boolean {
    return this.token !== null;
  }

  get bookcaseName(): string | null {
    return this.bookcase?.name ?? null;
  }

  unlockToken(): string | null {
    return this.token;
  }

  openBookcase(token: string, view: BookcaseView): void {
    this.token = token;
    this.bookcase = view;
  }

  refreshBookcase(view: BookcaseView): void {
    this.bookcase = view;
  }

  clear(): void {
    this.token = null;
    this.bookcase = null;
  }
}
