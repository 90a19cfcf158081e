from __future__ import annotations

import numpy as np
import pytest

from stabgrid.errors import ResourceError
from stabgrid.groundstate import (
    check_b_constraints,
    config_group,
    config_ints,
    enumerate_configs,
)
from stabgrid.models import parse_model, build_model

from _oracles import gf2_rank_ints, gf2_span


@pytest.mark.parametrize("model_text", ["[0,1,2,2]@2x2:pbc", "[0,1,2,2]@3x3:pbc"])
def test_group_size_is_x_rank(backend, model_text):
    spec, lat = parse_model(model_text)
    m = build_model(spec, lat)
    grp = config_group(m)
    x_rows = [op.x_bits for _, op in m.generators if op.x_bits]
    assert grp.log2_size == gf2_rank_ints(x_rows)
    assert grp.offset == 0


def test_enumeration_is_exact_span(backend):
    spec, lat = parse_model("[0,1,2,2]@2x2:pbc")
    m = build_model(spec, lat)
    grp = config_group(m)
    cfgs = enumerate_configs(grp)
    got = set(config_ints(cfgs))
    want = gf2_span([op.x_bits for _, op in m.generators if op.x_bits])
    assert got == want
    assert len(cfgs) == len(got)  # no duplicate rows


def test_enumeration_order_deterministic(backend):
    spec, lat = parse_model("[0,1,2,2]@3x3:pbc")
    grp = config_group(build_model(spec, lat))
    a = enumerate_configs(grp)
    b = enumerate_configs(grp)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("model_text", ["[0,1,2,2]@2x2:pbc", "[0,1,2,2]@3x3:pbc"])
def test_all_configs_satisfy_z_constraints(backend, model_text):
    spec, lat = parse_model(model_text)
    m = build_model(spec, lat)
    cfgs = enumerate_configs(config_group(m))
    assert all(check_b_constraints(v, m) for v in config_ints(cfgs))
    # and a flipped spin breaks at least one constraint
    assert not check_b_constraints(config_ints(cfgs)[0] ^ 1, m)


def test_cap_raises(backend):
    spec, lat = parse_model("[0,1,2,2]@3x3:pbc")
    grp = config_group(build_model(spec, lat))
    with pytest.raises(ResourceError):
        enumerate_configs(grp, max_configs=2 ** (grp.log2_size - 1))
