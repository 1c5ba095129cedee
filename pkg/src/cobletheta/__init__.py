"""Coble invariants of six points and genus-5 theta constants on the 4-ball.

Modules: ``gf3`` (finite geometry over F_3), ``arith`` (Eisenstein lattices,
unitary and symplectic groups), ``coble`` (the 80 invariants Z_v),
``periods`` (period matrices of the trigonal genus-5 curves), ``theta``
(theta functions with characteristics), ``verify`` (end-to-end reports) and
``cli``.
"""
__version__ = "0.1.0"
