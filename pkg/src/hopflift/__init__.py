"""Exact descent-operator Markov chains on permutations, tableaux and partitions.

Modules
-------
combinat   partitions, permutations, standard tableaux, RSK, unbumping
exactalg   exact rational matrices, characteristic and minimal polynomials
hopf       FQSym / FSym / Lambda operators and rescaling functions
chains     Doob transform, named chains, spectra, multistep comparison
lumping    fibre maps, strong (Dynkin) and weak lumping certificates
sample     seedable batch samplers and empirical checks
cli        the ``hopflift`` command
"""
from .chains import doob_transform, named_chain
from .hopf import Algebra, DescentOpSpec

__version__ = "0.1.0"
__all__ = ["Algebra", "DescentOpSpec", "doob_transform", "named_chain", "__version__"]
