import type { ThemeSpec, ThemeSpecEntry } from "./types.js";

export interface DraftTheme {
  name: string;
  memberTopics: number[];
}

export type AddResult = { ok: true } | { ok: false; error: string };

/** Client-side mirror of the server's theme-spec invariants.
 *
 * Holds the current topic selection and the draft themes being
 * assembled. Overlap and emptiness are checked here so the UI can block
 * a doomed POST before it happens; the server re-validates regardless.
 */
export class WorkbenchState {
  readonly selection = new Set<number>();
  drafts: DraftTheme[] = [];
  dirty = false;

  constructor(private topicIds: number[] = []) {}

  setTopics(ids: number[]): void {
    this.topicIds = [...ids];
    for (const id of this.selection) {
      if (!this.topicIds.includes(id)) this.selection.delete(id);
    }
  }

  get topicCount(): number {
    return this.topicIds.length;
  }

  toggle(topicId: number): void {
    if (!this.topicIds.includes(topicId)) return;
    if (this.selection.has(topicId)) {
      this.selection.delete(topicId);
    } else {
      this.selection.add(topicId);
    }
  }

  clearSelection(): void {
    this.selection.clear();
  }

  /** Name of the draft theme already claiming a topic, if any. */
  claimedBy(topicId: number): string | null {
    for (const draft of this.drafts) {
      if (draft.memberTopics.includes(topicId)) return draft.name;
    }
    return null;
  }

  addTheme(name: string): AddResult {
    const trimmed = name.trim();
    if (!trimmed) return { ok: false, error: "theme name must be non-empty" };
    if (this.selection.size === 0) {
      return { ok: false, error: "select at least one topic first" };
    }
    if (this.drafts.some((d) => d.name === trimmed)) {
      return { ok: false, error: `theme ${trimmed} already exists` };
    }
    for (const id of this.selection) {
      const owner = this.claimedBy(id);
      if (owner !== null) {
        return {
          ok: false,
          error: `topic ${id} already belongs to ${owner}`,
        };
      }
    }
    this.drafts.push({
      name: trimmed,
      memberTopics: [...this.selection].sort((a, b) => a - b),
    });
    this.selection.clear();
    this.dirty = true;
    return { ok: true };
  }

  removeTheme(index: number): void {
    if (index >= 0 && index < this.drafts.length) {
      this.drafts.splice(index, 1);
      this.dirty = true;
    }
  }

  /** Replace drafts with the server's persisted spec (load / reload). */
  loadSpec(spec: ThemeSpec): void {
    this.drafts = spec.themes.map((theme: ThemeSpecEntry) => ({
      name: theme.name,
      memberTopics: [...theme.member_topics],
    }));
    this.dirty = false;
  }

  toSpec(): ThemeSpec {
    return {
      themes: this.drafts.map((draft) => ({
        name: draft.name,
        member_topics: [...draft.memberTopics],
      })),
    };
  }
}
