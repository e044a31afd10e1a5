"""Plain-text model files.

Layout::

    smm 1
    kind <kind>
    dims <n> [<k> | <k1,...,kp>]
    params <a1> <a2> ...          (absent for some kinds)
    seed <s>                      (optional)
    prng <algorithm id>           (optional)
    matrix <rows> <cols>
    <rows lines of cols numbers>
    matrix ...                    (further blocks for multi-matrix kinds)

Numbers are written as the shortest decimal string that round-trips to the
same binary64 value, so write -> read -> write is byte-identical.  Lines
starting with ``#`` are comments.
"""

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import errors
from .errors import ConstraintViolation, ParseError
from .flag import AbstractFlag, FlagSignature, IsospectralParams, IsospectralPoint
from .grassmann import GrassmannPoint, QuadraticParams
from .linalg import check_spd, is_symmetric
from .metrics import FlagMTangent, StiefelMTangent
from .product import GrassmannProductPoint, product_violations
from .stiefel import CholeskyStiefelPoint, Factors

FORMAT = "smm"
VERSION = 1

# kind -> (dims form, params form); dims form is "n", "nk" or "nsig"
KINDS = {
    "grassmann": ("nk", "pair"),
    "flag": ("nsig", "vector"),
    "stiefel": ("nk", "spd"),
    "spd": ("n", None),
    "product": ("nsig", None),
    "basis": ("nsig", None),
    "factors": ("nk", "spd"),
    "tangent-flag": ("nsig", None),
    "tangent-stiefel": ("nk", None),
    "sym": ("n", None),
}


@dataclass
class ModelManifest:
    kind: str
    n: int
    k: tuple = ()
    params: tuple = None
    matrices: list = field(default_factory=list)
    seed: int = None
    prng: str = None


def _num(x):
    x = float(x)
    if not math.isfinite(x):
        raise ConstraintViolation(f"non-finite value {x!r}")
    return repr(x)


def format_manifest(m):
    if m.kind not in KINDS:
        raise ConstraintViolation(f"unknown kind {m.kind!r}")
    lines = [f"{FORMAT} {VERSION}", f"kind {m.kind}"]
    dims = f"dims {int(m.n)}"
    if m.k:
        dims += " " + ",".join(str(int(v)) for v in m.k)
    lines.append(dims)
    if m.params is not None:
        lines.append("params " + " ".join(_num(v) for v in m.params))
    if m.seed is not None:
        lines.append(f"seed {int(m.seed)}")
    if m.prng is not None:
        lines.append(f"prng {m.prng}")
    for M in m.matrices:
        M = np.atleast_2d(np.asarray(M, dtype=float))
        lines.append(f"matrix {M.shape[0]} {M.shape[1]}")
        lines.extend(" ".join(_num(v) for v in row) for row in M)
    return "\n".join(lines) + "\n"


def _int(tok, lineno, col):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno, col) from None


def _float(tok, lineno, col):
    try:
        value = float(tok)
    except ValueError:
        raise ParseError(f"expected a number, got {tok!r}", lineno, col) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite number {tok!r}", lineno, col)
    return value


def _tokens(line):
    """Split on single spaces, returning ``(token, 1-based column)`` pairs."""
    out, col = [], 1
    for tok in line.split(" "):
        if tok:
            out.append((tok, col))
        col += len(tok) + 1
    return out


def parse_manifest(text):
    lines = [
        (i, line)
        for i, line in enumerate(text.split("\n"), start=1)
        if line.strip() and not line.startswith("#")
    ]
    pos = 0

    def next_line(keyword):
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 1
            raise ParseError(f"unexpected end of file, expected {keyword!r}", last + 1)
        lineno, line = lines[pos]
        toks = _tokens(line.rstrip("\r"))
        if keyword is not None and (not toks or toks[0][0] != keyword):
            raise ParseError(f"expected {keyword!r}", lineno)
        pos += 1
        return lineno, toks

    if not lines:
        raise ParseError("empty file", 1)
    lineno, first = lines[0]
    head = _tokens(first.rstrip("\r"))
    if lineno != 1 or [t for t, _ in head] != [FORMAT, str(VERSION)]:
        raise ParseError(f"header must be '{FORMAT} {VERSION}'", lineno)
    pos = 1

    lineno, toks = next_line("kind")
    if len(toks) != 2 or toks[1][0] not in KINDS:
        raise ParseError(f"unknown kind {' '.join(t for t, _ in toks[1:])!r}", lineno, toks[-1][1])
    kind = toks[1][0]
    dims_form, params_form = KINDS[kind]

    lineno, toks = next_line("dims")
    expected = 2 if dims_form == "n" else 3
    if len(toks) != expected:
        raise ParseError(f"dims for kind {kind!r} takes {expected - 1} fields", lineno)
    n = _int(*toks[1], lineno)
    k = ()
    if len(toks) == 3:
        k = tuple(_int(part, lineno, toks[2][1]) for part in toks[2][0].split(","))
        if dims_form == "nk" and len(k) != 1:
            raise ParseError("expected a single k", lineno, toks[2][1])

    m = ModelManifest(kind, n, k)
    if params_form is not None:
        lineno, toks = next_line("params")
        m.params = tuple(_float(t, lineno, c) for t, c in toks[1:])
    while pos < len(lines) and lines[pos][1].split(" ")[0] in ("seed", "prng"):
        lineno, toks = next_line(None)
        if len(toks) != 2:
            raise ParseError(f"{toks[0][0]} takes one field", lineno)
        if toks[0][0] == "seed":
            m.seed = _int(*toks[1], lineno)
        else:
            m.prng = toks[1][0]
    while pos < len(lines):
        lineno, toks = next_line("matrix")
        if len(toks) != 3:
            raise ParseError("matrix takes two fields", lineno)
        rows, cols = _int(*toks[1], lineno), _int(*toks[2], lineno)
        M = np.empty((rows, cols))
        for r in range(rows):
            rlineno, rtoks = next_line(None)
            if len(rtoks) != cols:
                raise ParseError(f"expected {cols} numbers, got {len(rtoks)}", rlineno)
            M[r] = [_float(t, rlineno, c) for t, c in rtoks]
        m.matrices.append(M)
    return m


def read_manifest(path):
    return parse_manifest(Path(path).read_text(encoding="utf-8"))


def write_manifest(m, path):
    Path(path).write_text(format_manifest(m), encoding="utf-8", newline="\n")


def _spd_entries(A):
    return tuple(np.asarray(A, dtype=float).ravel())


def to_manifest(obj, kind=None, seed=None, prng=None):
    """Convert a model object to its manifest.

    Plain arrays need ``kind`` set to ``"spd"`` or ``"sym"``.
    """
    if isinstance(obj, GrassmannPoint):
        m = ModelManifest("grassmann", obj.n, (obj.k,), tuple(obj.params), [obj.X])
    elif isinstance(obj, IsospectralPoint):
        m = ModelManifest("flag", obj.n, obj.sig.k, tuple(obj.params), [obj.X])
    elif isinstance(obj, CholeskyStiefelPoint):
        m = ModelManifest("stiefel", obj.n, (obj.k,), _spd_entries(obj.A), [obj.Y])
    elif isinstance(obj, GrassmannProductPoint):
        m = ModelManifest("product", obj.n, obj.signature.k, None, list(obj.projectors))
    elif isinstance(obj, AbstractFlag):
        m = ModelManifest("basis", obj.n, obj.signature.k, None, list(obj.blocks))
    elif isinstance(obj, Factors):
        R = obj.R
        m = ModelManifest("factors", obj.Q.shape[0], (R.shape[0],), _spd_entries(R.T @ R), [obj.Q, R])
    elif isinstance(obj, FlagMTangent):
        m = ModelManifest(
            "tangent-flag", obj.sig.n, obj.sig.k, None,
            [obj.blocks[key] for key in sorted(obj.blocks)],
        )
    elif isinstance(obj, StiefelMTangent):
        m = ModelManifest("tangent-stiefel", obj.n, (obj.k,), None, [obj.B1, obj.B2])
    elif kind in ("spd", "sym"):
        M = np.asarray(obj, dtype=float)
        m = ModelManifest(kind, M.shape[0], (), None, [M])
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} (kind={kind!r})")
    m.seed, m.prng = seed, prng
    return m


def _need_matrices(m, shapes):
    got = [M.shape for M in m.matrices]
    if got != [tuple(s) for s in shapes]:
        raise ConstraintViolation(f"kind {m.kind!r} expects matrices {shapes}, got {got}")


def _square_spd(entries, k, what):
    if entries is None or len(entries) != k * k:
        raise ConstraintViolation(f"{what} needs {k * k} entries")
    A = np.array(entries).reshape(k, k)
    try:
        return check_spd(A)
    except errors.NotPositiveDefinite as exc:
        raise ConstraintViolation(f"{what}: {exc}") from exc


def from_manifest(m):
    """Typed model object for a manifest, checking parameter constraints."""
    try:
        if m.kind in ("flag", "product", "basis", "tangent-flag"):
            sig = FlagSignature(m.n, m.k)
        elif m.kind in ("grassmann", "stiefel", "factors", "tangent-stiefel"):
            (k,) = m.k
            if not 0 < k <= m.n:
                raise ConstraintViolation(f"invalid dims n={m.n}, k={k}")
    except errors.InvalidDimensions as exc:
        raise ConstraintViolation(str(exc)) from exc
    n = m.n

    if m.kind == "grassmann":
        if len(m.params) != 2:
            raise ConstraintViolation("grassmann needs two params")
        try:
            params = QuadraticParams(*m.params)
        except errors.DegenerateParams as exc:
            raise ConstraintViolation(str(exc)) from exc
        if not 0 < k < n:
            raise ConstraintViolation(f"need 0 < k < n, got k={k}, n={n}")
        _need_matrices(m, [(n, n)])
        return GrassmannPoint(m.matrices[0], params, k)
    if m.kind == "flag":
        try:
            params = IsospectralParams(m.params)
        except errors.SmmError as exc:
            raise ConstraintViolation(str(exc)) from exc
        if len(params) != sig.p + 1:
            raise ConstraintViolation(f"need {sig.p + 1} params, got {len(params)}")
        _need_matrices(m, [(n, n)])
        return IsospectralPoint(m.matrices[0], sig, params)
    if m.kind == "stiefel":
        A = _square_spd(m.params, k, "stiefel params")
        _need_matrices(m, [(n, k)])
        return CholeskyStiefelPoint(m.matrices[0], A)
    if m.kind in ("spd", "sym"):
        _need_matrices(m, [(n, n)])
        M = m.matrices[0]
        if m.kind == "spd":
            try:
                check_spd(M)
            except errors.NotPositiveDefinite as exc:
                raise ConstraintViolation(str(exc)) from exc
        elif not is_symmetric(M):
            raise ConstraintViolation("matrix is not symmetric")
        return M
    if m.kind == "product":
        _need_matrices(m, [(n, n)] * (sig.p + 1))
        G = GrassmannProductPoint(tuple(m.matrices))
        bad = product_violations(G)
        if bad or G.ranks != sig.multiplicities:
            raise ConstraintViolation(f"not a product point: {bad or G.ranks}")
        return G
    if m.kind == "basis":
        _need_matrices(m, [(n, d) for d in sig.multiplicities])
        try:
            return AbstractFlag(tuple(m.matrices))
        except errors.InvalidFlag as exc:
            raise ConstraintViolation(str(exc)) from exc
    if m.kind == "factors":
        _square_spd(m.params, k, "factors params")
        _need_matrices(m, [(n, n), (k, k)])
        return Factors(*m.matrices)
    if m.kind == "tangent-flag":
        mult = sig.multiplicities
        pairs = list(itertools.combinations(range(sig.p + 1), 2))
        _need_matrices(m, [(mult[i], mult[j]) for i, j in pairs])
        return FlagMTangent(sig, dict(zip(pairs, m.matrices)))
    if m.kind == "tangent-stiefel":
        _need_matrices(m, [(k, k), (n - k, k)])
        try:
            return StiefelMTangent(*m.matrices)
        except errors.ShapeMismatch as exc:
            raise ConstraintViolation(str(exc)) from exc
    raise ConstraintViolation(f"unknown kind {m.kind!r}")


def read_model(path):
    return from_manifest(read_manifest(path))


def write_model(obj, path, kind=None, seed=None, prng=None):
    write_manifest(to_manifest(obj, kind, seed, prng), path)
