export interface KeywordEntry {
  term: string;
  weight: number;
}

export interface MergeStep {
  left: number;
  right: number;
  distance: number;
}

export interface TopicsSection {
  n_topics: number;
  labels: number[];
  topic_sizes: number[];
  topic_keywords: KeywordEntry[][];
  ctfidf_vectors: Record<string, number>[];
  noise_count: number;
  similarity: number[][] | null;
  hierarchy: MergeStep[];
  embedder_id: string;
}

export interface TrendBucket {
  period: string;
  mean_sentiment: number;
  review_count: number;
  normalized_count: number;
}

export interface NgramEntry {
  gram: string;
  count: number;
}

export interface TfidfEntry {
  term: string;
  score: number;
}

export interface Report {
  schema_version: string;
  corpus: {
    total: number;
    analyzed: number;
    spam_removed: number;
    short: number;
    mid: number;
    long: number;
  };
  sentiment: {
    trend: TrendBucket[];
    label_distribution: Record<string, number>;
    classifier_id: string;
  };
  terms: {
    unigrams: { n: number; entries: NgramEntry[] };
    bigrams: { n: number; entries: NgramEntry[] };
    trigrams: { n: number; entries: NgramEntry[] };
    tfidf: { entries: TfidfEntry[] };
  };
  topics?: TopicsSection;
  provenance: Record<string, unknown>;
}

export interface ThemeSpecEntry {
  name: string;
  member_topics: number[];
}

export interface ThemeSpec {
  themes: ThemeSpecEntry[];
}

export interface DerivedTheme {
  name: string;
  member_topics: number[];
  review_count: number;
  keywords: KeywordEntry[];
}

export interface ThemeReport {
  themes: DerivedTheme[];
  unassigned: number[];
  noise_count: number;
}

export interface ThemesPayload {
  spec: ThemeSpec;
  derived: ThemeReport;
}
