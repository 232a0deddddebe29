"""Embedding certificates over the searched HNN corpus, per base algebra.

Also probes twisted instances (alpha != id) built from the twist construction,
where the classical reduction no longer applies.
"""
import argparse
import collections
import sys

from homhnn.cli import canonical_json
from homhnn import generate as gen
from homhnn import library as lib
from homhnn.homalg import check_hom_associative
from homhnn.hnn import embedding_certificate_assoc, search_assoc_instances


def twisted_algebras():
    out = []
    for _, base, autos in gen.associative_bases():
        if base.dim > 3 or not autos:
            continue
        for a in autos[1:]:
            A = lib.yau_twist(base, a)
            if check_hom_associative(A).passed:
                out.append(A)
    return out


def survey(instances, maxlen):
    tally = collections.defaultdict(lambda: {"instances": 0, "passed": 0, "kernel_nonzero": 0, "residual_nonzero": 0})
    for data in instances:
        cert = embedding_certificate_assoc(data, maxlen)
        row = tally[" ".join(data.A.basis_names)]
        row["instances"] += 1
        row["passed"] += cert.passed
        row["kernel_nonzero"] += cert.kernel_dim > 0
        row["residual_nonzero"] += bool(cert.failing_relations)
    return dict(tally)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--maxlen", type=int, default=2)
    args = p.parse_args()
    classical = search_assoc_instances(args.seed, 3, max_instances=10_000)
    twisted = search_assoc_instances(args.seed, 3, algebras=twisted_algebras(), max_instances=10_000)
    sys.stdout.write(canonical_json({
        "seed": args.seed,
        "max_length": args.maxlen,
        "classical": survey(classical, args.maxlen),
        "twisted": survey(twisted, args.maxlen),
    }))


if __name__ == "__main__":
    main()
