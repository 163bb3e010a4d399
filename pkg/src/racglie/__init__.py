"""Lie algebras of right-angled Coxeter groups: GPTW generators, N_K, lower central series."""
