"""
Helper Utilities Module
Common functions used across the frontend, summaries and commands
"""

import os
import re
import tempfile
from thefuzz import process, fuzz


def normalize_identifier(s: str) -> str:
    """Normalize a Fortran identifier for comparison"""
    return re.sub(r"\s+", "", s).lower()


def smart_threshold(query: str) -> int:
    """Determine fuzzy matching threshold based on identifier length"""
    qlen = len(normalize_identifier(query))
    if qlen <= 2:
        return 60
    if qlen <= 5:
        return 75
    return 80


def get_best_suggestions(query: str, keys: list, limit: int = 3) -> list:
    """Get best fuzzy match suggestions for a misspelt identifier"""
    qn = normalize_identifier(query)
    if not qn or not keys:
        return []

    candidates = sorted(set(keys))
    starts = [k for k in candidates if k != qn and k.startswith(qn)]
    if starts:
        return starts[:limit]

    matches = process.extract(qn, candidates, limit=limit * 2, scorer=fuzz.ratio)
    thresh = smart_threshold(qn)
    filtered = [m[0] for m in matches if m[1] >= thresh and m[0] != qn]

    seen = set()
    out = []
    for k in filtered:
        if k not in seen:
            seen.add(k)
            out.append(k)
        if len(out) >= limit:
            break
    return out


def leading_whitespace(line: str) -> str:
    return line[: len(line) - len(line.lstrip(" \t"))]


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a temporary file in the same directory, then rename"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", suffix=os.path.basename(path), dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
