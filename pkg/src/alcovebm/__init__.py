"""Braden-MacPherson sheaves on alcove moment graphs and their Hecke-algebra shadows.

The modules are layered: :mod:`rootdata` and :mod:`alcoves` give the combinatorics,
:mod:`coxeter_hecke` the Hecke-algebra side, :mod:`moment_graph` and
:mod:`graded_linalg` the substrate for :mod:`bm_sheaves`, and
:mod:`translation_action` and :mod:`hom_stability` the functors and experiments
built on top.
"""

__version__ = "0.1.0"
