"""
From partitions up to tableaux and permutations
================================================

The partition chain is the image of a chain on standard tableaux, which in
turn is the image of a card shuffle.  The first projection (shape) is a
strong lumping; the second (RSK insertion tableau) is only weak.
"""

# %%
# Shape is a strong lumping
# -------------------------
from hopflift.chains import multistep_identity_compare, named_chain
from hopflift.lumping import dynkin_strong_check, rsk_p_map, sh_map, weak_lumping_check

n = 5
cert = dynkin_strong_check(named_chain("tableau-downup", n), sh_map(n))
print("sh lumps the tableau chain:", bool(cert))
print("lumped matrix is the partition chain:", cert.lumped == named_chain("partition-downup", n))

# %%
# RSK is only a weak lumping
# --------------------------
# Dynkin's criterion fails, and the certificate names two permutations in
# one fibre whose fibre-sum rows differ.
bad = dynkin_strong_check(named_chain("b2r-std", 3), rsk_p_map(3))
print(bad.to_json(rsk_p_map(3))["witness"])

weak = weak_lumping_check(named_chain("b2r-std", n), named_chain("tableau-downup", n), rsk_p_map(n))
print("weak lumping:", bool(weak), "|", weak.initial_distributions)

# %%
# With and without standardisation
# --------------------------------
# Starting from the sorted deck, the two bottom-to-random shuffles have the
# same law at every time even though their paths differ.
rep = multistep_identity_compare(4, 2, target=(3, 1, 4, 2))
print(rep["verdict"], rep["witness"])
