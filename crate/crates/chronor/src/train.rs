//! Training (placeholder during bring-up).
