import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from isoprod.actions import RamificationOrbit, validate_action
from isoprod.curves import build_graph
from isoprod.document import parse_document
from isoprod.groups import FiniteGroup, perm_from_cycles


@pytest.fixture(scope="session")
def z2():
    return FiniteGroup.from_generators([perm_from_cycles([[0, 1]], 2)], 2)


@pytest.fixture(scope="session")
def nodal_quartic_graph():
    """One genus-2 component with a single node (a self-loop)."""
    return build_graph([2], [0, 0], [(0, 1)])


@pytest.fixture(scope="session")
def paper_action(z2, nodal_quartic_graph):
    """Involution fixing the node, swapping its branches, with two more
    order-2 fixed points on the component; the smoothing parameter is fixed."""
    return validate_action(
        z2,
        nodal_quartic_graph,
        vertex_images=[(0,)],
        half_edge_images=[(1, 0)],
        smoothing_chars={(1, 0): Fraction(0)},
        ramification_orbits=[
            RamificationOrbit(0, 1, Fraction(1, 2), 2),
            RamificationOrbit(0, 1, Fraction(1, 2), 2),
        ],
    )


@pytest.fixture(scope="session")
def smooth_fiber_action(z2):
    """Smooth genus-3 curve, involution with four order-2 fixed points."""
    graph = build_graph([3], [], [])
    return validate_action(
        z2,
        graph,
        vertex_images=[(0,)],
        half_edge_images=[()],
        ramification_orbits=[RamificationOrbit(0, 1, Fraction(1, 2), 2)] * 4,
    )


@pytest.fixture(scope="session")
def free_involution_action(z2):
    """Free involution on a smooth genus-3 curve (quotient genus 2)."""
    graph = build_graph([3], [], [])
    return validate_action(z2, graph, vertex_images=[(0,)], half_edge_images=[()])


@pytest.fixture(scope="session")
def kernel_component_action(z2):
    """Two components joined at one node; the involution acts trivially on
    the first component (kernel Z2) and faithfully on the second, where it
    fixes the node branch with character -1 and one more ramification orbit."""
    graph = build_graph([2, 2], [0, 1], [(0, 1)])
    return validate_action(
        z2,
        graph,
        vertex_images=[(0, 1)],
        half_edge_images=[(0, 1)],
        tangent_chars={(1, 1): Fraction(1, 2)},
        kernels={0: [1]},
        ramification_orbits=[RamificationOrbit(1, 1, Fraction(1, 2), 2)],
    )


@pytest.fixture(scope="session")
def bundled_document_text():
    from importlib.resources import files

    return files("isoprod").joinpath("data/quartic_node.json").read_text()


@pytest.fixture(scope="session")
def golden_doc(bundled_document_text):
    return parse_document(bundled_document_text)
