"""Group-ring matrices over countable groups: lopsidedness classification,
certified Neumann inversion in the l1 matrix algebra, the symbolic cover
map with exact error ledgers, and a verification harness for the
Haar-pushforward identity and cover-map injectivity at desk scale.

All core arithmetic is exact (integers and fractions); floats appear only
in Monte Carlo estimates and report rendering.
"""

from .errors import (
    BudgetExceededError,
    InsufficientPrecisionError,
    InsufficientSupportError,
    InvariantFailureError,
    LopactError,
    ModelSyntaxError,
    NoCandidateError,
    NotLopsidedError,
    OracleIncompleteError,
    SearchBudgetError,
    WindowTooSmallError,
    WitnessNotLocalizedError,
)
from .group import (
    FREE,
    FREE_ABELIAN,
    GroupElement,
    GroupSpec,
    HomomorphismOrder,
    OrderOracle,
    SemigroupOrder,
    ball,
)
from .ring import COLUMN, ROW, RingElement, RingMatrix, other_side, row_mul
from .lopsided import (
    LopsidedDecomposition,
    Positivity,
    SymbolAlphabet,
    classify_positive,
    decompose,
    normalize,
    normalized_decomposition,
    symbol_alphabet,
)
from .inverse import (
    TruncatedInverse,
    adjoint_inverse,
    contraction_ratio,
    residual,
    residual_of,
    truncated_inverse,
)
from .dynamics import (
    Configuration,
    SymbolMeasure,
    TorusPoint,
    Window,
    homoclinic_image,
    pairing,
    sample_configuration,
    shift,
    u64,
)
from .verify import (
    BOUNDARY_OPEN,
    FULL,
    Collision,
    CollisionLabel,
    CollisionSearchResult,
    Member,
    MembershipVerdict,
    NonMember,
    Witness,
    classify_collision,
    collision_search,
    decide_membership,
    defect_height,
    empirical_fourier,
    empirical_fourier_bound,
    haar_fourier,
)
from .model import Model, emit_model, parse_expression, parse_model
from .parallel import worker_count

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
