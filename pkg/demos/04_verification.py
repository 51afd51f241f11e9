"""
Verification AUC
================

Genuine pairs share a subject, impostor pairs do not. With many subjects the
impostor side is subsampled; repeating with different seeds gives a spread.
"""

import numpy as np

from pawvit.verification import EmbeddingSet, count_pairs, repeated_auc, roc_auc, score_pairs

rng = np.random.default_rng(0)
centers = rng.normal(size=(20, 32))
emb = EmbeddingSet({f"id{k}": c + 0.8 * rng.normal(size=(5, 32)) for k, c in enumerate(centers)})

genuine, impostor = count_pairs(emb)
print(f"{genuine} genuine pairs, {impostor} impostor pairs")

scores = score_pairs(emb, similarity="cosine")
print(f"AUC with all pairs: {roc_auc(scores):.4f}")

###############################################################################
# Five trials, 500 impostor pairs each, seeds 7..11.

report = repeated_auc(emb, trials=5, impostor_cap=500, seed=7, similarity="cosine")
print("per trial:", np.round(report.aucs, 4).tolist())
print(f"mean {report.mean:.4f} +/- {report.half_width:.4f}")
