"""Up-set monoid combinatorics and strong homotopy theory of finite posets."""

__version__ = "0.1.0"

from .poset import (  # noqa: F401
    BudgetError,
    Chain,
    CycleError,
    MonotoneMap,
    Poset,
    PosetError,
    build_poset,
    compose,
    covers,
    dual,
    identity,
    induced_subposet,
    mapping_poset,
    pi0,
    product,
    subdivision,
    subset_lattice,
)
from .homotopy import (  # noqa: F401
    HomotopyChain,
    contractibility_oracle,
    core,
    find_adjoints,
    is_homotopy_cofinal,
    is_homotopy_final,
    is_strongly_contractible,
    strong_homotopic,
)
from .monoid import (  # noqa: F401
    LevelSet,
    ThreadList,
    UpSet,
    catalogue3,
    enumerate_q,
    is_thread_realizable,
    kappa,
    star,
    submonoid_closure,
    thread_set,
    u_of,
    v_of,
)
from .expr import evaluate, parse_expr, eval_expr  # noqa: F401
