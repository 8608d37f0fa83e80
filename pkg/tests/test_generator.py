import time

import pytest
from click.testing import CliRunner

from commands.generator import SINGLE, GeneratorParams, function_lines, generate, render_corpus
from commands.reports import inferred_units
from commands.session import analyse
from main import cli
from summaries import compile_module, write_summary
from units.core import ParamAbs, Var


def write_corpus(params: GeneratorParams, directory) -> list[str]:
    return generate(params, str(directory))


def test_function_body_is_a_product_chain():
    lines = function_lines(3, GeneratorParams(n=3, l=5, a=2))
    assert lines[0] == "  real function f3(v1, v2)"
    assert lines[1] == "    real :: v1, v2, v3, v4, v5"
    assert lines[2:5] == ["    v3 = v1 * v2", "    v4 = v2 * v3", "    v5 = v3 * v4"]
    assert lines[-2:] == ["    f3 = v5", "  end function f3"]


def test_layouts():
    mult = render_corpus(GeneratorParams(n=3, l=5, a=2))
    assert list(mult) == ["m1.f90", "m2.f90", "m3.f90", "top.f90"]
    assert "  use m3\n" in mult["top.f90"]
    assert "subroutine top(p1, p2, p3, p4, p5, p6)" in mult["top.f90"]
    (single,) = render_corpus(GeneratorParams(n=3, l=5, a=2, fmt=SINGLE)).values()
    assert single.count("end function") == 3


@pytest.mark.parametrize(
    ("params", "message"),
    [
        (GeneratorParams(n=0, l=5, a=2), "positive"),
        (GeneratorParams(n=1, l=1, a=2), "shorter"),
        (GeneratorParams(n=1, l=5, a=2, fmt="zip"), "fmt"),
    ],
)
def test_invalid_parameters(params, message):
    with pytest.raises(ValueError, match=message):
        params.validate()


@pytest.mark.parametrize(("length", "exponents"), [(5, (2, 3)), (10, (21, 34)), (15, (233, 377))])
def test_result_exponents_follow_fibonacci(tmp_path, length, exponents):
    paths = write_corpus(GeneratorParams(n=1, l=length, a=2), tmp_path)
    _, (analysis, _) = analyse(paths)
    solution = analysis.result.solution
    first = solution.unit_of(Var(ParamAbs("f1", 1)))
    second = solution.unit_of(Var(ParamAbs("f1", 2)))
    (g1,) = first
    (g2,) = second
    assert solution.unit_of(Var(ParamAbs("f1", 0))) == {g1: exponents[0], g2: exponents[1]}


def test_single_and_multiple_layouts_agree(tmp_path):
    single_dir, mult_dir = tmp_path / "single", tmp_path / "mult"
    single_dir.mkdir()
    mult_dir.mkdir()

    def function_units(paths):
        _, analyses = analyse(paths)
        assert all(a.ok for a in analyses)
        return {
            (item.declaration.function, item.declaration.name): item.text
            for a in analyses
            for item in inferred_units(a)
            if (item.declaration.function or "").startswith("f")
        }

    single = function_units(write_corpus(GeneratorParams(n=3, l=10, a=2, fmt=SINGLE), single_dir))
    mult = function_units(write_corpus(GeneratorParams(n=3, l=10, a=2), mult_dir))
    assert len(single) == 3 * 11
    assert single == mult


@pytest.mark.slow
def test_summaries_shrink_the_top_level_system(tmp_path):
    params = GeneratorParams(n=10, l=20, a=2)
    source_dir, summary_dir = tmp_path / "source", tmp_path / "summary"
    source_dir.mkdir()
    summary_dir.mkdir()

    joint = analyse(write_corpus(params, source_dir))[1][-1]
    assert joint.ok

    paths = write_corpus(params, summary_dir)
    for path in paths[:-1]:
        _, (module,) = analyse([path])
        write_summary(compile_module(module.entry, module.result.solution), str(summary_dir))
    _, (separate,) = analyse([paths[-1]])
    assert separate.ok

    assert joint.unit.name == separate.unit.name == "top_mod"
    assert len(joint.constraints) >= 3 * len(separate.constraints)


def best_time(runner: CliRunner, *invocations: list[str], repeat: int = 3) -> float:
    """Fastest wall-clock time of running the invocations in order."""
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        for args in invocations:
            result = runner.invoke(cli, args)
            assert result.exit_code == 0, result.stderr
        times.append(time.perf_counter() - start)
    return min(times)


@pytest.mark.slow
def test_separate_compilation_is_faster_end_to_end(tmp_path):
    single_dir, mult_dir = tmp_path / "single", tmp_path / "mult"
    single_dir.mkdir()
    mult_dir.mkdir()
    (single,) = write_corpus(GeneratorParams(n=15, l=15, a=2, fmt=SINGLE), single_dir)
    mult = write_corpus(GeneratorParams(n=15, l=15, a=2), mult_dir)

    runner = CliRunner()
    whole = best_time(runner, ["infer", single])
    separate = best_time(runner, ["compile", *mult[:-1]], ["infer", mult[-1]])
    assert whole >= 3 * separate, f"single file {whole:.3f}s, compile then infer {separate:.3f}s"
