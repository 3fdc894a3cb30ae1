"""Finite proto-exact categories: semiring modules, lattices and hypermodules."""
