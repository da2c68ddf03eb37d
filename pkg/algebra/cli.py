"""
Command Front End
=================
Argument schema, input parsing and dispatch shared by the management
commands ``ring``, ``code``, ``skew``, ``bt`` and ``mustafin``.

``run(argv)`` executes one command in-process and returns a CommandResult;
argv starts with the group name, e.g. ``["bt", "hull", "--backend", "tadic",
"--d", "3", "--lattices", "I,diag(1,t,t^2)"]``.

Location: algebra/cli.py
"""

import argparse
import json
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from . import buildings, mustafin, rank_codes, skew_algebra
from .chain_rings import (
    build_galois_ring,
    integral_basis_conditions,
    parse_element,
    pi_digits,
    teichmuller_lift,
)
from .conf import get_setting
from .exceptions import AlgebraError, UsageError
from .local_linalg import rank_profile
from .models import ComputationRecord
from .valued_scalars import PAdicField, TAdicField, ValuedMatrix

logger = logging.getLogger(__name__)

GROUPS = ('ring', 'code', 'skew', 'bt', 'mustafin')

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2


@dataclass
class CommandResult:
    command: str
    action: str
    status: str
    payload: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    error: Optional[dict] = None
    exit_code: int = EXIT_OK
    arguments: dict = field(default_factory=dict)
    table: Optional[List[dict]] = None

    @property
    def ok(self) -> bool:
        return self.status == 'ok'

    def to_json(self) -> dict:
        out = {'command': self.command, 'action': self.action, 'status': self.status,
               'payload': self.payload, 'diagnostics': self.diagnostics}
        if self.error is not None:
            out['error'] = self.error
        return out

    def render_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def render_table(self) -> str:
        if not self.table:
            return ''
        return pd.DataFrame(self.table).to_string(index=False)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


# Flags whose values are expressions and may start with a minus sign.
EXPRESSION_FLAGS = frozenset({'--eta', '--value', '--f', '--g', '--elements', '--generators',
                              '--basis', '--lattice', '--lattices', '--matrices'})


def join_expression_values(argv: Sequence[str]) -> List[str]:
    """
    Fuse ``--eta -1+pi^1`` into ``--eta=-1+pi^1``.

    argparse only accepts a separate value starting with '-' when it looks
    like a plain negative number.
    """
    joined, tokens = [], iter(argv)
    for token in tokens:
        if token in EXPRESSION_FLAGS:
            value = next(tokens, None)
            if value is not None and not value.startswith('--'):
                joined.append(f"{token}={value}")
                continue
            joined.append(token)
            if value is not None:
                joined.append(value)
            continue
        joined.append(token)
    return joined


# ---------------------------------------------------------------------------
# input grammar
# ---------------------------------------------------------------------------

def split_top_level(text: str, sep: str = ',') -> List[str]:
    """Split on ``sep`` outside parentheses and brackets."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in '([':
            depth += 1
        elif ch in ')]':
            depth -= 1
            if depth < 0:
                raise UsageError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            parts.append(''.join(current).strip())
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise UsageError(f"unbalanced brackets in {text!r}")
    parts.append(''.join(current).strip())
    return [p for p in parts if p]


def _strip_brackets(text: str) -> str:
    text = text.strip()
    if not (text.startswith('[') and text.endswith(']')):
        raise UsageError(f"expected a bracketed list, got {text!r}")
    return text[1:-1]


def parse_matrix(field, text: str) -> ValuedMatrix:
    """A nested list such as ``[[1,0],[1,2]]`` with entries in the field's expression grammar."""
    rows = [[field.parse(x) for x in split_top_level(_strip_brackets(row))]
            for row in split_top_level(_strip_brackets(text))]
    return ValuedMatrix.from_rows(field, rows)


def parse_lattice(field, text: str, d: Optional[int]) -> ValuedMatrix:
    """``I``, ``diag(a,b,...)`` or a nested list."""
    text = text.strip()
    if text == 'I':
        if d is None:
            raise UsageError("--d is required for the identity lattice I")
        return ValuedMatrix.identity(field, d)
    if text.startswith('diag(') and text.endswith(')'):
        return ValuedMatrix.diagonal(field, [field.parse(x) for x in split_top_level(text[5:-1])])
    if text.startswith('['):
        return parse_matrix(field, text)
    raise UsageError(f"cannot read lattice {text!r}; expected I, diag(...) or [[...],...]")


def parse_lattices(field, text: str, d: Optional[int]) -> List[ValuedMatrix]:
    lattices = [parse_lattice(field, item, d) for item in split_top_level(text)]
    if not lattices:
        raise UsageError("--lattices is empty")
    if d is not None and any(L.nrows != d for L in lattices):
        raise UsageError(f"every lattice must be {d}×{d}")
    return lattices


def make_field(options):
    if options.backend == 'tadic':
        return TAdicField()
    if options.p is None:
        raise UsageError("--p is required for the p-adic backend")
    return PAdicField(options.p)


def _ring(options, k: Optional[int] = None):
    depth = options.k if options.k is not None else k
    if depth is None:
        raise UsageError("--k is required")
    return build_galois_ring(options.p, depth, options.n)


def _elements(ring, text: Optional[str], flag: str):
    if not text:
        raise UsageError(f"{flag} is required")
    return [parse_element(ring, x) for x in text.split(';') if x.strip()]


def _sigma(ring, text: Optional[str], flag: str):
    if not text:
        raise UsageError(f"{flag} is required")
    return skew_algebra.parse_sigma_poly(ring, text)


# ---------------------------------------------------------------------------
# handlers: each returns (payload, diagnostics, table rows)
# ---------------------------------------------------------------------------

Handler = Callable[[argparse.Namespace], Tuple[dict, dict, Optional[List[dict]]]]


def ring_build(o):
    ring = _ring(o)
    payload = {'ring': ring.to_json(), 'modulus': ring.base_modulus, 'size': ring.size,
               'residue_size': ring.residue_size, 'unit_group_order': ring.unit_group_order,
               'xi': ring.xi.to_text()}
    table = [{'i': i, 'sigma^i(xi)': ring.frobenius(ring.xi, i).to_text()} for i in range(ring.n)]
    return payload, {}, table


def ring_teich(o):
    ring = _ring(o)
    if o.value is None:
        raise UsageError("--value is required (residue coefficients, comma separated)")
    try:
        residue = [int(x) for x in o.value.split(',')]
    except ValueError:
        raise UsageError(f"--value must be integers, got {o.value!r}")
    lift = teichmuller_lift(ring, residue)
    value = lift.to_int() if ring.n == 1 else lift.to_json()
    return {'ring': ring.to_json(), 'residue': residue, 'lift': value, 'text': lift.to_text()}, {}, None


def ring_digits(o):
    ring = _ring(o)
    if o.value is None:
        raise UsageError("--value is required")
    x = parse_element(ring, o.value)
    digits = pi_digits(x)
    table = [{'i': i, 'digit': d.to_text()} for i, d in enumerate(digits)]
    return {'ring': ring.to_json(), 'value': x.to_text(), 'digits': [d.to_json() for d in digits]}, {}, table


def _code_spec(o, kind: str, depth: int) -> rank_codes.CodeSpec:
    ring = _ring(o, depth)
    eta = parse_element(ring, o.eta) if o.eta is not None else None
    generators = ()
    if kind == 'custom':
        if not o.generators:
            raise UsageError("--generators is required for custom codes")
        generators = tuple(skew_algebra.parse_sigma_poly(ring, g) for g in o.generators.split(';') if g.strip())
    return rank_codes.CodeSpec(ring, kind, ell=o.ell, eta=eta, h=o.h, generators=generators)


def code_action(kind: str) -> Handler:
    def handler(o):
        chosen = [(name, getattr(o, name)) for name in ('filtration', 'mindist', 'mrd') if getattr(o, name) is not None]
        if len(chosen) != 1:
            raise UsageError("exactly one of --filtration, --mindist, --mrd is required")
        mode, depth = chosen[0]
        spec = _code_spec(o, kind, depth)
        budget = o.budget
        diagnostics = {}
        if mode == 'filtration':
            report = rank_codes.filtration_report(spec, depth, budget)
            payload = {'code': spec.to_json(), 'filtration': report.to_json()}
            table = [{'i': i, 'k_i': str(k), 'd_i': d, 'mrd': m}
                     for i, k, d, m in zip(report.depths, report.k_values, report.d_values, report.mrd_flags)]
        elif mode == 'mindist':
            d = rank_codes.min_distance(spec, depth, budget)
            payload = {'code': spec.to_json(), 'depth': depth, 'min_distance': d}
            table = None
        else:
            report = rank_codes.singleton_check(spec, depth, budget)
            payload = {'code': spec.to_json(), 'singleton': report.to_json()}
            table = [{k: v for k, v in report.to_json().items() if k != 'norm_certificate'}]
            if report.norm_certificate and not report.norm_certificate['mrd_guaranteed']:
                diagnostics['warnings'] = ["Norm(eta) equals (-1)^(ell*n): MRD is not guaranteed"]
        return payload, diagnostics, table
    return handler


def skew_annihilator(o):
    ring = _ring(o)
    beta = _elements(ring, o.elements, '--elements')
    f = skew_algebra.annihilator_recursive(beta, ring)
    g = skew_algebra.annihilator_determinant(beta, ring)
    payload = {'ring': ring.to_json(), 'recursive': f.to_json(), 'determinant': g.to_json(),
               'agree': f == g, 'text': f.to_text()}
    return payload, {}, None


def skew_divide(o):
    ring = _ring(o)
    f, g = _sigma(ring, o.f, '--f'), _sigma(ring, o.g, '--g')
    q, r = skew_algebra.right_divide(f, g)
    return {'quotient': q.to_json(), 'remainder': r.to_json(),
            'text': {'quotient': q.to_text(), 'remainder': r.to_text()}}, {}, None


def skew_normcheck(o):
    ring = _ring(o)
    f = _sigma(ring, o.f, '--f')
    report = skew_algebra.norm_condition_check(f, o.ell)
    payload = {'polynomial': f.to_text(), 'ell': o.ell, **report.to_json(),
               'inner_rank': skew_algebra.inner_rank_of(f)}
    return payload, {}, None


def skew_matrep(o):
    ring = _ring(o)
    f = _sigma(ring, o.f, '--f')
    basis = _elements(ring, o.basis, '--basis') if o.basis else None
    matrix = skew_algebra.matrix_rep(f, basis)
    profile = rank_profile(matrix, ring.base)
    payload = {'polynomial': f.to_text(), 'matrix': matrix, 'inner_rank': profile.inner_rank,
               'kernel_free_rank': profile.free_rank_kernel,
               'divisor_valuations': [str(v) for v in profile.divisor_valuations],
               'depth_profile': skew_algebra.depth_rank_profile(f)}
    if basis is not None:
        payload['basis_conditions'] = integral_basis_conditions(basis)
    table = [{f'c{j}': x for j, x in enumerate(row)} for row in matrix]
    return payload, {}, table


def _lattices(o):
    field = make_field(o)
    if not o.lattices:
        raise UsageError("--lattices is required")
    return field, parse_lattices(field, o.lattices, o.d)


def bt_canon(o):
    _, lattices = _lattices(o)
    classes = [buildings.lattice_class(M) for M in lattices]
    table = [{'input': str(M), 'canonical': str(L.canonical)} for M, L in zip(lattices, classes)]
    return {'classes': [L.to_json() for L in classes]}, {}, table


def bt_adjacent(o):
    _, lattices = _lattices(o)
    if len(lattices) != 2:
        raise UsageError("adjacent takes exactly two lattices")
    L1, L2 = (buildings.lattice_class(M) for M in lattices)
    return {'adjacent': buildings.adjacent(L1, L2), 'distance': buildings.distance(L1, L2),
            'classes': [L1.to_json(), L2.to_json()]}, {}, None


def _hull_diagnostics(hull) -> dict:
    if hull.closure_added:
        return {'warnings': [f"hull closure added {hull.closure_added} vertices beyond the enumeration box"]}
    return {}


def bt_hull(o):
    _, lattices = _lattices(o)
    hull = buildings.convex_hull(lattices)
    table = [{'vertex': str(v.canonical)} for v in hull.vertices]
    return {'size': len(hull), **hull.to_json()}, _hull_diagnostics(hull), table


def bt_member(o):
    field, lattices = _lattices(o)
    if not o.lattice:
        raise UsageError("--lattice is required")
    L = buildings.lattice_class(parse_lattice(field, o.lattice, o.d))
    hull = buildings.convex_hull(lattices)
    payload = {'lattice': L.to_json(), 'member': buildings.hull_member(L, hull), 'hull_size': len(hull)}
    return payload, _hull_diagnostics(hull), None


def bt_neighbors(o):
    _, lattices = _lattices(o)
    found = buildings.neighbors(lattices[0])
    table = [{'neighbor': str(L.canonical)} for L in found]
    return {'center': buildings.lattice_class(lattices[0]).to_json(),
            'neighbors': [L.to_json() for L in found]}, {}, table


def _finite_residue_diagnostics(field) -> dict:
    if field.finite_residue_field:
        return {'warnings': ["finite residue field: component classification is reported, not guaranteed"],
                'finite_residue_field': True}
    return {}


def mustafin_fiber(o):
    field, lattices = _lattices(o)
    if o.radius:
        reports = mustafin.neighbourhood_components(lattices, o.radius)
    else:
        reports = mustafin.special_fiber_components(lattices)
    components = [r for r in reports if r.is_component]
    table = [{'vertex': str(r.vertex.canonical), 'ranks': r.rank_vector, 'dim': r.dimension,
              'component': r.is_component, 'signature': r.signature_kind or '-',
              'M(d-1)': ' '.join(str(m) for m in r.top_multidegrees) if r.is_component else '-'}
             for r in reports]
    payload = {'vertices': [r.to_json() for r in reports], 'component_count': len(components),
               'signature_counts': {kind: sum(r.signature_kind == kind for r in components)
                                    for kind in ('concentrated', 'mixed')}}
    return payload, _finite_residue_diagnostics(field), table


def _code_matrices(o):
    field = make_field(o)
    if not o.matrices:
        raise UsageError("--matrices is required (matrices separated by ';')")
    return [parse_matrix(field, m) for m in o.matrices.split(';') if m.strip()]


def mustafin_mpdim(o):
    report = mustafin.mp_dimension(_code_matrices(o))
    return report.to_json(), {}, None


def mustafin_criterion(o):
    report = mustafin.basis_criterion(_code_matrices(o))
    table = [{'vertex': str(v.canonical)} for v in report.hull.vertices]
    return report.to_json(), _hull_diagnostics(report.hull), table


ACTIONS: Dict[str, Dict[str, Handler]] = {
    'ring': {'build': ring_build, 'teich': ring_teich, 'digits': ring_digits},
    'code': {kind: code_action(kind) for kind in rank_codes.KINDS},
    'skew': {'annihilator': skew_annihilator, 'divide': skew_divide,
             'normcheck': skew_normcheck, 'matrep': skew_matrep},
    'bt': {'canon': bt_canon, 'adjacent': bt_adjacent, 'hull': bt_hull,
           'member': bt_member, 'neighbors': bt_neighbors},
    'mustafin': {'fiber': mustafin_fiber, 'mpdim': mustafin_mpdim, 'criterion': mustafin_criterion},
}


# ---------------------------------------------------------------------------
# argument schema
# ---------------------------------------------------------------------------

def add_common_arguments(parser):
    parser.add_argument('--json', action='store_true', help='Print the result as JSON')
    parser.add_argument('--seed', type=int, default=None,
                        help='Recorded in the diagnostics only, the actions are deterministic '
                             '(default: ALGEBRA_DEFAULT_SEED)')
    parser.add_argument('--record', action='store_true', help='Store the result as a ComputationRecord')


def _ring_arguments(parser, need_k: bool = True):
    parser.add_argument('--p', type=int, required=True, help='Residue characteristic')
    parser.add_argument('--k', type=int, default=None,
                        help='Depth of the base ring Z/p^k' + ('' if need_k else ' (default: the requested depth)'))
    parser.add_argument('--n', type=int, required=True, help='Degree of the Galois extension')


def _field_arguments(parser):
    parser.add_argument('--backend', choices=['padic', 'tadic'], default='padic', help='Valued field backend')
    parser.add_argument('--p', type=int, default=None, help='Prime of the p-adic backend')
    parser.add_argument('--d', type=int, default=None, help='Lattice dimension')


def _add_action(subparsers, name: str, help_text: str):
    sub = subparsers.add_parser(name, help=help_text)
    add_common_arguments(sub)
    return sub


def configure_group(parser, group: str):
    """Attach the actions of ``group`` to ``parser`` as subcommands."""
    subparsers = parser.add_subparsers(dest='action', required=True)
    if group == 'ring':
        for name, help_text in (('build', 'Construct GR(p^k, n) and its Frobenius'),
                                ('teich', 'Teichmüller lift of a residue element'),
                                ('digits', 'Teichmüller digit expansion of an element')):
            sub = _add_action(subparsers, name, help_text)
            _ring_arguments(sub)
            if name != 'build':
                sub.add_argument('--value', type=str, default=None, help='Residue coefficients or element expression')
    elif group == 'code':
        for kind in rank_codes.KINDS:
            sub = _add_action(subparsers, kind, f'Parameters of a {kind} code')
            _ring_arguments(sub, need_k=False)
            sub.add_argument('--ell', type=int, default=1, help='Number of sigma-powers spanned')
            sub.add_argument('--eta', type=str, default=None, help='Twist coefficient, e.g. -1+pi^1')
            sub.add_argument('--h', type=int, default=0, help='Frobenius power of the twist')
            sub.add_argument('--generators', type=str, default=None, help="sigma-polynomials separated by ';'")
            sub.add_argument('--budget', type=int, default=None, help='Codeword enumeration budget')
            sub.add_argument('--filtration', type=int, default=None, metavar='I', help='k_i, d_i for i = 1..I')
            sub.add_argument('--mindist', type=int, default=None, metavar='i', help='Minimum distance at depth i')
            sub.add_argument('--mrd', type=int, default=None, metavar='i', help='Singleton check at depth i')
    elif group == 'skew':
        for name, help_text in (('annihilator', 'Monic annihilator of a free submodule'),
                                ('divide', 'Right division f = q·g + r'),
                                ('normcheck', 'Norm condition of a degree-ell polynomial'),
                                ('matrep', 'Matrix representation and ranks')):
            sub = _add_action(subparsers, name, help_text)
            _ring_arguments(sub)
            sub.add_argument('--elements', type=str, default=None, help="Ring elements separated by ';'")
            sub.add_argument('--f', type=str, default=None, help='sigma-polynomial, e.g. id + (1+3*xi)*sigma')
            sub.add_argument('--g', type=str, default=None, help='Divisor sigma-polynomial')
            sub.add_argument('--ell', type=int, default=1, help='Degree for the norm condition')
            sub.add_argument('--basis', type=str, default=None, help="Integral basis separated by ';'")
    elif group == 'bt':
        for name, help_text in (('canon', 'Canonical forms of lattice classes'),
                                ('adjacent', 'Adjacency and distance of two classes'),
                                ('hull', 'Convex hull of a set of classes'),
                                ('member', 'Hull membership of --lattice'),
                                ('neighbors', 'Neighbours of the first class (finite residue field)')):
            sub = _add_action(subparsers, name, help_text)
            _field_arguments(sub)
            sub.add_argument('--lattices', type=str, default=None, help='Comma separated: I, diag(...), [[...]]')
            if name == 'member':
                sub.add_argument('--lattice', type=str, default=None, help='Class to test')
    elif group == 'mustafin':
        for name, help_text in (('fiber', 'Components of the special fiber'),
                                ('mpdim', 'Multi-projective closure dimension of a matrix code'),
                                ('criterion', 'Hull criterion for an O-basis of a matrix code')):
            sub = _add_action(subparsers, name, help_text)
            _field_arguments(sub)
            if name == 'fiber':
                sub.add_argument('--lattices', type=str, default=None, help='Comma separated lattice list')
                sub.add_argument('--radius', type=int, default=0, help='Also scan vertices this far from the hull')
            else:
                sub.add_argument('--matrices', type=str, default=None, help="A_1;...;A_d as nested lists")
    else:
        raise UsageError(f"unknown command group {group!r}; expected one of {', '.join(GROUPS)}")
    return parser


def build_parser() -> CliParser:
    parser = CliParser(prog='algebra', description='Rank-metric codes, lattices and Mustafin fibers')
    groups = parser.add_subparsers(dest='group', required=True, parser_class=CliParser)
    for group in GROUPS:
        configure_group(groups.add_parser(group), group)
    return parser


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------

def _plain_arguments(options: dict) -> dict:
    skip = {'verbosity', 'settings', 'pythonpath', 'traceback', 'no_color', 'force_color', 'skip_checks',
            'stdout', 'stderr'}
    return {k: v for k, v in options.items() if k not in skip and v is not None}


def execute(group: str, options: dict) -> CommandResult:
    """Dispatch parsed options to the handler of ``group``/``options['action']``."""
    action = options.get('action')
    arguments = _plain_arguments(options)
    seed = options.get('seed')
    started = time.perf_counter()
    try:
        handler = ACTIONS.get(group, {}).get(action)
        if handler is None:
            raise UsageError(f"unknown action {group} {action}")
        payload, diagnostics, table = handler(argparse.Namespace(**options))
        status, error, code = 'ok', None, EXIT_OK
    except UsageError as exc:
        payload, diagnostics, table = {}, {}, None
        status, error, code = 'error', exc.to_dict(), EXIT_USAGE
    except AlgebraError as exc:
        payload, diagnostics, table = {}, {}, None
        status, error, code = 'error', exc.to_dict(), EXIT_DOMAIN_ERROR
    diagnostics = {**diagnostics,
                   'elapsed_ms': round((time.perf_counter() - started) * 1000, 3),
                   'seed': get_setting('ALGEBRA_DEFAULT_SEED') if seed is None else seed}
    result = CommandResult(group, action or '', status, payload, diagnostics, error, code, arguments, table)
    if options.get('record'):
        ComputationRecord.store(result)
    if status == 'ok':
        logger.info("%s %s finished in %.1f ms", group, action, diagnostics['elapsed_ms'])
    else:
        logger.warning("%s %s failed: %s", group, action, error['code'])
    return result


def run(argv: Sequence[str]) -> CommandResult:
    """Parse argv (starting with the group name) and execute it."""
    argv = join_expression_values(argv)
    try:
        options = vars(build_parser().parse_args(argv))
    except UsageError as exc:
        group = argv[0] if argv else ''
        action = argv[1] if len(argv) > 1 else ''
        return CommandResult(group, action, 'error', error=exc.to_dict(), exit_code=EXIT_USAGE,
                             arguments={'argv': argv})
    group = options.pop('group')
    return execute(group, options)
