import pytest

from codesum import jparse
from codesum.cli import demo_project_dir
from codesum.summarizer import ProjectIndex
from codesum.textpipe import Lexicon
from codesum.weights import WeightsDB


@pytest.fixture(scope="session")
def lex() -> Lexicon:
    return Lexicon.load()


@pytest.fixture(scope="session")
def icon_project() -> jparse.ProjectModel:
    return jparse.parse_project(demo_project_dir())


@pytest.fixture(scope="session")
def icon_index(icon_project, lex) -> ProjectIndex:
    return ProjectIndex.build(icon_project, lex)


@pytest.fixture(scope="session")
def default_db() -> WeightsDB:
    return WeightsDB.defaults()
