"""Verification evaluation: genuine/impostor pairs, dot-product scores, ROC AUC.

Genuine pairs are all same-subject pairs; impostor pairs are all cross-subject
pairs, optionally subsampled with a seeded generator. Pairs are enumerated in
a fixed canonical order (subjects in insertion order, then row-major within
each block), so a given seed always selects the same pairs.
"""
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DimensionMismatch, EmptyClass


@dataclass
class EmbeddingSet:
    subjects: dict          # subject_id -> (M_i, dim) float array
    image_ids: dict = None  # subject_id -> list of image ids, optional

    def __post_init__(self):
        dims = set()
        for sid, vecs in list(self.subjects.items()):
            vecs = np.atleast_2d(np.asarray(vecs, dtype=np.float64))
            if vecs.shape[0] == 0:
                raise ValueError(f"subject {sid!r} has no embeddings")
            self.subjects[sid] = vecs
            dims.add(vecs.shape[1])
        if len(dims) > 1:
            raise DimensionMismatch(f"embeddings have mixed dimensions {sorted(dims)}")

    @classmethod
    def from_records(cls, records):
        """Build from ``(subject_id, image_id, vector)`` tuples, keeping first-seen order."""
        vecs, ids = {}, {}
        for subject, image_id, vec in records:
            vecs.setdefault(subject, []).append(np.asarray(vec, dtype=np.float64))
            ids.setdefault(subject, []).append(image_id)
        dims = {v.shape for vs in vecs.values() for v in vs}
        if len(dims) > 1:
            raise DimensionMismatch(f"embeddings have mixed shapes {sorted(dims)}")
        return cls({s: np.vstack(v) for s, v in vecs.items()}, ids)

    @property
    def dim(self):
        return next(iter(self.subjects.values())).shape[1] if self.subjects else 0

    @property
    def counts(self):
        return np.array([v.shape[0] for v in self.subjects.values()], dtype=np.int64)

    def normalized(self):
        return EmbeddingSet({s: v / np.linalg.norm(v, axis=1, keepdims=True)
                             for s, v in self.subjects.items()}, self.image_ids)


@dataclass
class PairScores:
    genuine: np.ndarray
    impostor: np.ndarray

    def __post_init__(self):
        self.genuine = np.asarray(self.genuine, dtype=np.float64).ravel()
        self.impostor = np.asarray(self.impostor, dtype=np.float64).ravel()


@dataclass
class AucReport:
    aucs: list
    mean: float
    half_width: float
    trials: int
    seed: int
    genuine_count: int
    impostor_count: int
    impostor_total: int
    impostor_cap: int = None
    similarity: str = "dot"

    def to_dict(self):
        return asdict(self)


def count_pairs(embeddings):
    """``(sum_i C(M_i, 2), sum_{i<j} M_i M_j)``."""
    m = embeddings.counts
    genuine = int((m * (m - 1) // 2).sum())
    total = int(m.sum())
    impostor = int((total * total - int((m * m).sum())) // 2)
    return genuine, impostor


def genuine_scores(embeddings):
    out = []
    for vecs in embeddings.subjects.values():
        iu = np.triu_indices(len(vecs), k=1)
        out.append((vecs @ vecs.T)[iu])
    return np.concatenate(out) if out else np.empty(0)


def _impostor_blocks(embeddings):
    vecs = list(embeddings.subjects.values())
    blocks = [(i, j) for i in range(len(vecs)) for j in range(i + 1, len(vecs))]
    sizes = np.array([len(vecs[i]) * len(vecs[j]) for i, j in blocks], dtype=np.int64)
    return vecs, blocks, np.concatenate([[0], np.cumsum(sizes)])


def impostor_scores(embeddings, cap=None, seed=0):
    """Scores of all cross-subject pairs, or of ``cap`` of them drawn without
    replacement by ``numpy.random.default_rng(seed)``."""
    vecs, blocks, offsets = _impostor_blocks(embeddings)
    total = int(offsets[-1])
    if cap is None or cap >= total:
        flat = np.arange(total)
    else:
        flat = np.sort(np.random.default_rng(seed).choice(total, size=cap, replace=False))
    # one scoring path for both cases keeps a subsampled score bitwise equal to its full-set value
    blk = np.searchsorted(offsets, flat, side="right") - 1
    rest = flat - offsets[blk]
    scores = np.empty(len(flat))
    for b in np.unique(blk):
        i, j = blocks[b]
        sel = blk == b
        a, c = np.divmod(rest[sel], len(vecs[j]))
        scores[sel] = np.einsum("ij,ij->i", vecs[i][a], vecs[j][c])
    return scores


def score_pairs(embeddings, impostor_cap=None, seed=0, similarity="dot"):
    """Dot-product scores for every genuine pair and the selected impostor pairs.

    ``similarity="cosine"`` length-normalizes the embeddings first.
    """
    if similarity == "cosine":
        embeddings = embeddings.normalized()
    elif similarity != "dot":
        raise ValueError(f"unknown similarity {similarity!r}")
    return PairScores(genuine_scores(embeddings), impostor_scores(embeddings, impostor_cap, seed))


def roc_auc(scores):
    """Mann-Whitney AUC: P(genuine > impostor) with ties counted as one half."""
    g, i = scores.genuine, scores.impostor
    if len(g) == 0 or len(i) == 0:
        raise EmptyClass(f"need both classes, got {len(g)} genuine and {len(i)} impostor scores")
    ranks = rankdata(np.concatenate([g, i]))
    u = ranks[:len(g)].sum() - len(g) * (len(g) + 1) / 2.0
    return float(u / (len(g) * len(i)))


def roc_curve(scores):
    """``(fpr, tpr)`` from (0, 0) to (1, 1), one step per distinct score threshold."""
    g, i = scores.genuine, scores.impostor
    if len(g) == 0 or len(i) == 0:
        raise EmptyClass("need both classes for a ROC curve")
    thresholds = np.unique(np.concatenate([g, i]))[::-1]
    gs, is_ = np.sort(g), np.sort(i)
    tp = len(g) - np.searchsorted(gs, thresholds, side="left")
    fp = len(i) - np.searchsorted(is_, thresholds, side="left")
    tpr = np.concatenate([[0.0], tp / len(g)])
    fpr = np.concatenate([[0.0], fp / len(i)])
    return fpr, tpr


def repeated_auc(embeddings, trials=5, impostor_cap=None, seed=0, similarity="dot"):
    """AUC over ``trials`` repetitions, impostors resampled with seed ``seed + t``.

    The interval half-width is ``1.96 * s / sqrt(trials)`` with ``s`` the sample
    standard deviation of the per-trial AUCs.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if similarity == "cosine":
        embeddings = embeddings.normalized()
    elif similarity != "dot":
        raise ValueError(f"unknown similarity {similarity!r}")
    n_gen, n_imp = count_pairs(embeddings)
    if n_gen == 0 or n_imp == 0:
        raise EmptyClass(f"{n_gen} genuine and {n_imp} impostor pairs available")
    gen = genuine_scores(embeddings)
    fixed = impostor_cap is None or impostor_cap >= n_imp
    if fixed:
        shared = impostor_scores(embeddings)
    aucs = []
    for t in range(trials):
        imp = shared if fixed else impostor_scores(embeddings, impostor_cap, seed + t)
        aucs.append(roc_auc(PairScores(gen, imp)))
    arr = np.asarray(aucs)
    sd = float(arr.std(ddof=1)) if trials > 1 else 0.0
    return AucReport(
        aucs=aucs,
        mean=float(arr.mean()),
        half_width=float(1.96 * sd / np.sqrt(trials)),
        trials=trials,
        seed=seed,
        genuine_count=n_gen,
        impostor_count=n_imp if fixed else int(impostor_cap),
        impostor_total=n_imp,
        impostor_cap=impostor_cap,
        similarity=similarity,
    )
