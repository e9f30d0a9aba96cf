"""Tests for unified_clf."""
