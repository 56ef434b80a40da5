"""Quantum mechanics of the hydrogen atom on a fuzzy (noncommutative) space.

Wave functions are operators on the two-mode Fock space; the radial problem
reduces to a three-term recurrence that is diagonalized directly.
"""

__version__ = "0.1.0"

from .fock import TruncatedFockSpace, build_space  # noqa: E402
from .hamiltonian import bound_energy, build_radial_hamiltonian, diagonalize  # noqa: E402
from .scattering import enumerate_poles, s_matrix  # noqa: E402

__all__ = [
    "TruncatedFockSpace",
    "bound_energy",
    "build_radial_hamiltonian",
    "build_space",
    "diagonalize",
    "enumerate_poles",
    "s_matrix",
]
