"""ccasim — cavity-QED array simulator.

Full atom-cavity Hamiltonians of coupled-cavity arrays, effective many-body
models (polaritonic Bose-Hubbard, Kerr nonlinearities, effective spin
lattices) with closed-form parameter calculators, closed and open time
evolution, and quantitative full-vs-effective comparisons at desk scale.
"""

__version__ = "0.1.0"
