import stat
import sys
import textwrap
from pathlib import Path

import pytest

from kara import parse_interpretation, parse_program

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def load_corpus(name: str):
    program = parse_program((CORPUS / name / "program.lp").read_text())
    facts_path = CORPUS / name / "facts.lp"
    facts = parse_interpretation(facts_path.read_text()) if facts_path.exists() else None
    return program, facts


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def shelves():
    return load_corpus("shelves")


@pytest.fixture(scope="session")
def maze():
    return load_corpus("maze")


@pytest.fixture(scope="session")
def sorting():
    return load_corpus("sorting")


@pytest.fixture(scope="session")
def graphcoloring():
    return load_corpus("graphcoloring")


def make_solver(directory: Path, name: str, body: str) -> str:
    """Write an executable python script acting as an external solver."""
    path = directory / name
    script = f"#!{sys.executable}\n" + textwrap.dedent(body)
    path.write_text(script)
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


@pytest.fixture
def echo_clasp(tmp_path):
    """A solver that evaluates the program with this package's own engine and
    prints clasp-style witnesses; exercises the full subprocess protocol."""
    return make_solver(tmp_path, "fake-clingo", f"""
        import sys
        sys.path[:0] = {sys.path!r}
        from kara import parse_program, solve
        program = parse_program(open(sys.argv[1]).read())
        models = solve(program)
        if not models:
            print("UNSATISFIABLE")
        else:
            for i, model in enumerate(models, 1):
                print(f"Answer: {{i}}")
                print(" ".join(str(a) for a in model))
            print("SATISFIABLE")
        """)
