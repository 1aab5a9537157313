"""Review monitoring pipeline: ingestion, filtering, text prep, sentiment
trends, term statistics, density-clustered topics, and theme curation."""

__version__ = "0.1.0"
