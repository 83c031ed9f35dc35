from __future__ import annotations

from pathlib import Path

import pytest

from tarapath.catalog import Catalog, load_catalog_file
from tarapath.compiler import RuleMeta, load_meta_file
from tarapath.model import Model, load_model_file
from tarapath.trees import AssetRoot, merge_trees, reduce_tree

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
CORPUS = FIXTURES / "corpus"
RUNNING = FIXTURES / "running_example"
SPIDER = FIXTURES / "spider"


@pytest.fixture(scope="session")
def running_model() -> Model:
    return load_model_file(str(RUNNING / "model.json"))


@pytest.fixture(scope="session")
def running_model_mitigated() -> Model:
    return load_model_file(str(RUNNING / "model_mitigated.json"))


@pytest.fixture(scope="session")
def running_catalog() -> Catalog:
    return load_catalog_file(str(RUNNING / "catalog.json"))


@pytest.fixture(scope="session")
def running_meta() -> RuleMeta:
    return load_meta_file(str(RUNNING / "meta.json"))


@pytest.fixture(scope="session")
def spider_model() -> Model:
    return load_model_file(str(SPIDER / "model.json"))


@pytest.fixture(scope="session")
def spider_catalog() -> Catalog:
    return load_catalog_file(str(SPIDER / "catalog.json"))


@pytest.fixture(scope="session")
def spider_meta() -> RuleMeta:
    return load_meta_file(str(SPIDER / "meta.json"))


@pytest.fixture(scope="session")
def ecu_tree(running_catalog: Catalog) -> AssetRoot:
    """Merged tree for the running example's ECU asset (five attack paths)."""
    wifi = running_catalog.tree_for("wifi-access")
    sensor = running_catalog.tree_for("sensor-feed")
    ecu = running_catalog.tree_for("ecu-control")
    return merge_trees(ecu, {"wifi-access": wifi, "sensor-feed": sensor})


@pytest.fixture(scope="session")
def gateway_tree(spider_catalog: Catalog) -> AssetRoot:
    """Merged, reduced gateway tree (40 attack paths)."""
    wifi = spider_catalog.tree_for("wifi-access")
    v2x = spider_catalog.tree_for("v2x-comms")
    gateway = reduce_tree(spider_catalog.tree_for("gateway-control"))
    return merge_trees(gateway, {"wifi-access": wifi, "v2x-comms": v2x})


@pytest.fixture(scope="session")
def hlc_tree(spider_catalog: Catalog, gateway_tree: AssetRoot) -> AssetRoot:
    """Merged, reduced high-level-controller tree (200 attack paths)."""
    sensor = spider_catalog.tree_for("sensor-feed")
    hlc = reduce_tree(spider_catalog.tree_for("hlc-compute"))
    return merge_trees(hlc, {"gateway-control": gateway_tree, "sensor-feed": sensor})


def corpus_files() -> list[Path]:
    return sorted(CORPUS.glob("*.dsl"))
