//! Evaluation (placeholder during bring-up).
