"""Quantum Otto machine with a q-deformed Poschl-Teller working substance."""
