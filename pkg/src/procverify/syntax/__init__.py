"""Text formats: ``.ccs``, ``.vpm``, ``.cert`` and modal formulas."""
from .ccs import format_ccs, lts_to_recdef, parse_ccs, parse_ccs_expr
from .cert import Certificate, format_cert, load_cert, parse_cert
from .formula import parse_formula
from .lexer import Token, tokenize
from .vexpr import parse_expr, parse_type
from .vpm import format_vpm, parse_vpm
