import pytest
from conftest import data_path

from commands.generator import GeneratorParams, render_corpus
from commands.session import analyse
from summaries import compile_module, format_summary, intrinsic_signature, parse_summary, read_summary, write_summary
from summaries.loader import summary_entry
from units.core import BaseUnit, ExplicitAbs, Var, normalize
from utils.errors import SummaryError, SummaryVersionError

METRE = BaseUnit("metre")
SEC = BaseUnit("sec")

SAMPLE = """\
fsmod 1
# precompiled by hand
var g metre / (sec**2)
fun square 1
slot 0 ('a)**2
slot 1 'a
fun reset 1 subroutine
slot 1 1
"""


def alpha(name: str = "'a", owner: str = "") -> Var:
    return Var(ExplicitAbs(name, owner))


def test_parse_summary_records():
    summary = parse_summary(SAMPLE, "phys.fsmod")
    assert summary.name == "phys"
    assert normalize(summary.variables["g"]) == {METRE: 1, SEC: -2}
    square = summary.functions["square"]
    assert square.arity == 1
    assert normalize(square.slots[0]) == {alpha(): 2}
    assert summary.functions["reset"].kind == "subroutine"
    assert summary.constraint_count() == 4


def test_format_summary_is_stable():
    summary = parse_summary(SAMPLE, "phys.fsmod")
    text = format_summary(summary)
    assert text.splitlines()[0] == "fsmod 1"
    assert "# precompiled" not in text
    assert format_summary(parse_summary(text, "phys.fsmod")) == text


@pytest.mark.parametrize(
    "text",
    [
        "var x metre\n",
        "fsmod 1\nslot 0 metre\n",
        "fsmod 1\nfun f 1\nslot 2 metre\n",
        "fsmod 1\nvar x metre /\n",
        "fsmod 1\nvar x metre\nvar x sec\n",
        "",
    ],
)
def test_malformed_summaries_are_rejected(text):
    with pytest.raises(SummaryError):
        parse_summary(text, "bad.fsmod")


def test_summary_version_is_checked():
    with pytest.raises(SummaryVersionError):
        parse_summary("fsmod 2\n", "old.fsmod")


def test_intrinsic_signatures():
    sqrt = intrinsic_signature("SQRT")
    assert normalize(sqrt.slots[1]) == {alpha(): 2}
    assert normalize(sqrt.slots[0]) == {alpha(): 1}
    assert intrinsic_signature("max").variadic
    assert normalize(intrinsic_signature("sin").slots[1]) == {}
    assert intrinsic_signature("nosuch") is None


def test_summary_entry_scopes_polymorphic_names():
    entry = summary_entry(parse_summary(SAMPLE, "phys.fsmod"), "phys.fsmod")
    (slot0, slot1) = entry.templates["square"].body
    assert normalize(slot0.rhs) == {alpha("'a", "phys.square"): 2}
    assert slot1.provenance.reason == "summary"
    assert len(entry.constraints) == 1


def test_compile_helper_module(tmp_path):
    _, (analysis,) = analyse([data_path("helper.f90")])
    summary = compile_module(analysis.entry, analysis.result.solution)
    assert normalize(summary.variables["x0"]) == {METRE: 1}
    assert normalize(summary.variables["v0"]) == {METRE: 1, SEC: -1}
    square = summary.functions["square"]
    assert normalize(square.slots[0]) == {alpha("'a", "square"): 2}
    assert normalize(square.slots[1]) == {alpha("'a", "square"): 1}

    path = write_summary(summary, str(tmp_path))
    assert path.endswith("helper.fsmod")
    loaded = read_summary(path)
    assert format_summary(loaded) == format_summary(summary)
    assert "slot 0 ('a)**2" in format_summary(loaded).splitlines()


def test_summaries_shrink_generated_modules(tmp_path):
    files = render_corpus(GeneratorParams(n=10, l=20, a=2))
    raw = summarised = 0
    for name, text in files.items():
        if not name.startswith("m"):
            continue
        path = tmp_path / name
        path.write_text(text)
        _, (analysis,) = analyse([str(path)])
        summary = compile_module(analysis.entry, analysis.result.solution)
        raw += sum(len(t.constraints) for t in analysis.entry.templates.values())
        summarised += summary.constraint_count()
    assert raw == 220
    assert summarised == 30
