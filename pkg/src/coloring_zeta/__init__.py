"""Coloring zeta functions of polynomial-count varieties over finite fields."""
