"""Effect-graded monads as image factorizations over finite sets."""

__version__ = "0.1.0"

from .finset import (
    FactorizationError,
    FinFun,
    FinSet,
    InstanceTooLarge,
    carrier_cap,
    check_diagonal_fill,
    coproduct,
    exponential,
    factorize,
    product,
)
from .monad import KINDS, MonadSpec, catalog, check_monad_laws, check_preserves_surjections, monad_spec
from .signature import (
    FactoredMonad,
    Interpretation,
    Leaf,
    Node,
    Operation,
    Signature,
    TheoremViolation,
    check_lemma2_stabilization,
    enumerate_terms,
    eval_term,
    factor,
    interpretation,
    render,
    saturate,
    verify_theorem1,
)
from .analysis import correctness_check, kernel_partition, modularity_profile, stability_check
from .presets import PRESETS, preset

__all__ = [name for name in dir() if not name.startswith("_")]
