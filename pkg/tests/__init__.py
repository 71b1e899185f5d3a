"""Tests for the synthesizer."""
