"""Value-passing processes over finite domains."""
from .brute import equivalent_exprs, is_valid, leq, satisfiable, valuations
from .cert import Verdict, diagram_correct, invariant_holds, verify_mu_certificate
from .compose import (merge_handshake, rename_variables, separate_variables, vp_choice, vp_combine,
                      vp_parallel, vp_parallel_all, vp_prefix, vp_rename, vp_restrict)
from .expr import (FALSE, TRUE, App, Expr, Lit, Var, and_, app, compile_expr, eq, eval_expr,
                   free_vars, lit, not_, or_, subst)
from .flowchart import Flowchart, flowchart_to_process
from .ops import (Assign, CompositeOp, Executor, Guard, In, Out, append_op, compose_path,
                  seq_compose)
from .petri import PetriNet, petri_to_process
from .process import (INIT_STATE, MAX_CONCRETE, Concretizer, Transition, VpProcess, concretize, empty_vp,
                      init_evaluations, plain, solve_init)
from .reduce import essential_vars, glue, inessential_vars, reduce, remove_inessential
from .types import (BOOL, DISTORTED, EMPTY, ArrayT, Bool, Distorted, Enum, IntRange, ListT, TupleT,
                    VList, VType)

__all__ = [name for name in dir() if not name.startswith("_")]
