"""Bell-type inequalities for l1-norm and relative-entropy coherence on two qubits."""

__version__ = "0.1.0"

from .bell import (  # noqa: E402
    BellReport,
    SettingQuartet,
    b_cl1,
    b_cr,
    chsh,
    quartet_chsh_optimal,
    quartet_example1,
    quartet_example2,
)
from .coherence import (  # noqa: E402
    CoherencePair,
    ObservableSetting,
    c_l1,
    c_r,
    c_r_oracle,
    rotate_local,
    setting_from_observable,
)
from .kernels import BACKEND  # noqa: E402
from .states import QState, max_coherent, product, pure_two_qubit, singlet, werner  # noqa: E402

__all__ = [
    "BACKEND",
    "BellReport",
    "CoherencePair",
    "ObservableSetting",
    "QState",
    "SettingQuartet",
    "b_cl1",
    "b_cr",
    "c_l1",
    "c_r",
    "c_r_oracle",
    "chsh",
    "max_coherent",
    "product",
    "pure_two_qubit",
    "quartet_chsh_optimal",
    "quartet_example1",
    "quartet_example2",
    "rotate_local",
    "setting_from_observable",
    "singlet",
    "werner",
]
