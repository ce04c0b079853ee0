"""JSON reading and writing for series, tuples, representations and reports.

Validation errors carry a JSON path such as ``$.coeffs[3].word[1]``; when
the source text is known, the path is translated into a byte offset.
"""
import json
import re
from json.decoder import JSONDecoder, scanstring

import gmpy2

from .errors import ParseError
from .scalars import scalar_from_json

_decoder = JSONDecoder()
_ws = re.compile(r"[ \t\n\r]*")


def dumps(obj):
    """Deterministic JSON text (sorted keys, fixed indentation, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _byte_offset(text, idx):
    return len(text[:idx].encode("utf-8"))


def _path_tokens(path):
    return [t for t in re.findall(r"\.([^.\[]+)|\[(\d+)\]", path)]


def locate(text, path):
    """Character index of the value at ``path`` in ``text``, or None."""
    idx = _ws.match(text, 0).end()
    for key, pos in _path_tokens(path):
        if idx >= len(text):
            return None
        ch = text[idx]
        if key and ch == "{":
            idx = _ws.match(text, idx + 1).end()
            found = False
            while idx < len(text) and text[idx] == '"':
                name, idx = scanstring(text, idx + 1)
                idx = _ws.match(text, idx).end() + 1  # colon
                idx = _ws.match(text, idx).end()
                if name == key:
                    found = True
                    break
                _, idx = _decoder.raw_decode(text, idx)
                idx = _ws.match(text, idx).end()
                if text[idx] == ",":
                    idx = _ws.match(text, idx + 1).end()
            if not found:
                return None
        elif pos and ch == "[":
            idx = _ws.match(text, idx + 1).end()
            for _ in range(int(pos)):
                _, idx = _decoder.raw_decode(text, idx)
                idx = _ws.match(text, idx).end()
                if text[idx] != ",":
                    return None
                idx = _ws.match(text, idx + 1).end()
        else:
            return None
    return idx


def loads(text, parse, source=None):
    """Parse ``text`` as JSON and hand it to ``parse``; errors gain byte offsets."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", "$", _byte_offset(text, exc.pos)) from None
    try:
        return parse(obj)
    except ParseError as exc:
        if exc.offset is None and exc.path:
            try:
                idx = locate(text, exc.path)
            except (ValueError, IndexError):
                idx = None
            if idx is not None:
                raise ParseError(exc.message, exc.path,
                                 _byte_offset(text, idx)) from None
        raise


def load_file(path, parse):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, parse, path)


# validators ----------------------------------------------------------------------


def _int(obj, path, lo=None):
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ParseError("expected an integer", path)
    if lo is not None and obj < lo:
        raise ParseError(f"expected an integer >= {lo}", path)
    return obj


def _prime(obj, path):
    ell = _int(obj, path, 2)
    if not gmpy2.is_prime(ell):
        raise ParseError(f"{ell} is not prime", path)
    return ell


def _field(obj, key, path):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path)
    if key not in obj:
        raise ParseError(f"missing field {key!r}", path)
    return obj[key]


def _list(obj, path):
    if not isinstance(obj, list):
        raise ParseError("expected an array", path)
    return obj


def series_from_json(obj, path="$"):
    from .series import NCSeries

    n = _int(_field(obj, "n", path), f"{path}.n", 1)
    D = _int(_field(obj, "D", path), f"{path}.D", 0)
    ell = _prime(_field(obj, "ell", path), f"{path}.ell")
    coeffs = {}
    for t, term in enumerate(_list(_field(obj, "coeffs", path), f"{path}.coeffs")):
        tp = f"{path}.coeffs[{t}]"
        word = _list(_field(term, "word", tp), f"{tp}.word")
        letters = []
        for k, letter in enumerate(word):
            lp = f"{tp}.word[{k}]"
            if isinstance(letter, bool) or not isinstance(letter, int) or not 1 <= letter <= n:
                raise ParseError(f"word letter must be an integer in 1..{n}", lp)
            letters.append(letter)
        if len(letters) > D:
            raise ParseError(f"word longer than D={D}", f"{tp}.word")
        key = tuple(letters)
        if key in coeffs:
            raise ParseError("repeated word", f"{tp}.word")
        c = scalar_from_json(_field(term, "c", tp), f"{tp}.c")
        if getattr(c, "ell", ell) != ell:
            raise ParseError("scalar prime differs from series prime", f"{tp}.c")
        coeffs[key] = c
    return NCSeries(n, D, ell, coeffs)


def endo_from_json(obj, path="$"):
    from .endo import EndoTuple
    from .errors import NCSiegelError

    comps = _list(_field(obj, "components", path), f"{path}.components")
    series = [series_from_json(c, f"{path}.components[{i}]") for i, c in enumerate(comps)]
    for key in ("n", "D", "ell"):
        if key in obj and any(getattr(s, key) != obj[key] for s in series):
            raise ParseError(f"component {key} disagrees with the tuple", f"{path}.{key}")
    try:
        return EndoTuple(series)
    except NCSiegelError as exc:
        raise ParseError(str(exc), f"{path}.components") from None


def series_list_from_json(obj, path="$"):
    """A bare list of series, or an object with ``components`` or ``ys``."""
    for key in ("components", "ys"):
        if isinstance(obj, dict) and key in obj:
            obj, path = obj[key], f"{path}.{key}"
            break
    return [series_from_json(c, f"{path}[{i}]") for i, c in enumerate(_list(obj, path))]


def matrix_from_json(obj, m, path):
    from .rep import to_matrix

    rows = _list(obj, path)
    if len(rows) != m:
        raise ParseError(f"expected {m} rows", path)
    out = []
    for i, row in enumerate(rows):
        row = _list(row, f"{path}[{i}]")
        if len(row) != m:
            raise ParseError(f"expected {m} entries", f"{path}[{i}]")
        out.append([scalar_from_json(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    return to_matrix(out)


def repr_from_json(obj, path="$"):
    from fractions import Fraction

    from .errors import NCSiegelError
    from .rep import ReprSpec

    ell = _prime(_field(obj, "ell", path), f"{path}.ell")
    N = _field(obj, "N", path)
    try:
        N = Fraction(str(N))
    except (ValueError, ZeroDivisionError):
        raise ParseError("N must be a number or rational string", f"{path}.N") from None
    m = _int(_field(obj, "m", path), f"{path}.m", 1)
    images = [matrix_from_json(M, m, f"{path}.images[{i}]")
              for i, M in enumerate(_list(_field(obj, "images", path), f"{path}.images"))]
    try:
        return ReprSpec(ell, N, m, images)
    except NCSiegelError as exc:
        raise ParseError(str(exc), f"{path}.images") from None
