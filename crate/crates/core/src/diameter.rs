//! End-to-end diameter algorithms (placeholder).
