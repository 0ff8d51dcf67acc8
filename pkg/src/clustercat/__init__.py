"""Cluster morphism categories of hereditary path algebras."""
