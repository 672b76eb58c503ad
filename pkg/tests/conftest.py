import random

import pytest

from qpcalc.examples import qp_a2, qp_c3, qp_k2, qp_triv, random_qp

N_RANDOM_CORPUS = 20
CORPUS_SEED = 20250


def build_corpus():
    qps = [("a2", qp_a2()), ("c3", qp_c3()), ("triv", qp_triv()), ("k2", qp_k2())]
    rng = random.Random(CORPUS_SEED)
    for k in range(N_RANDOM_CORPUS):
        qps.append((f"rand{k}", random_qp(rng)))
    return qps


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def mutable_pairs(corpus):
    pairs = []
    for name, q in corpus:
        for v in q.quiver.vertices:
            if q.is_mutable(v)[0]:
                pairs.append((name, q, v))
    return pairs
