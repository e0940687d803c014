import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))  # make tests/oracles importable

from arklight.project import ParsedProject, parse_project, parse_source
from arklight.scene import SceneConfig, build_scene

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(*parts) -> str:
    return os.path.join(FIXTURES, *parts)


def scene_from_sources(sources, config=None):
    """Build a Scene from {path: source} without touching the filesystem."""
    if isinstance(sources, str):
        sources = {"main.ets": sources}
    files = []
    for path in sorted(sources):
        parsed = parse_source(path, sources[path])
        files.append(parsed)
    project = ParsedProject(root=".", files=files, diagnostics=[])
    return build_scene(project, config)


def scene_from_dir(path, config=None):
    project = parse_project(path)
    if config is None:
        config = SceneConfig(root=str(path))
    return build_scene(project, config)


def parse_clean(source, path="main.ets"):
    """Parse and require zero diagnostics."""
    parsed = parse_source(path, source)
    assert not parsed.diagnostics, [d.render() for d in parsed.diagnostics]
    return parsed


@pytest.fixture
def fig6_scene():
    return scene_from_dir(fixture_path("fig6"))


@pytest.fixture
def listing3_scene():
    return scene_from_dir(fixture_path("listing3"))
