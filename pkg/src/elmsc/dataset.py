"""Multi-view data handling: loading, cross-view similarity, augmented matrix.

A dataset is a list of view matrices (features x samples, all sharing the
sample axis). The augmented matrix stacks the raw views on its diagonal
blocks and similarity-weighted cross-view products off the diagonal.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._seeds import rng_from
from .numerics import pca_reduce

_LABEL_DTYPE = np.int64


class DatasetError(Exception):
    """A manifest or matrix file could not be loaded as declared."""


@dataclass
class MultiViewDataset:
    """v feature matrices over the same n samples, plus optional labels."""

    views: list
    labels: np.ndarray | None = None
    view_names: list | None = None

    def __post_init__(self):
        if len(self.views) < 1:
            raise ValueError("a dataset needs at least one view")
        self.views = [np.asarray(v, dtype=np.float64) for v in self.views]
        n = self.views[0].shape[1]
        for i, v in enumerate(self.views):
            if v.ndim != 2 or v.shape[0] < 1:
                raise ValueError(f"view {i} must be a 2-d matrix with >=1 feature")
            if v.shape[1] != n:
                raise ValueError(
                    f"view {i} has {v.shape[1]} samples, expected {n}"
                )
            if not np.all(np.isfinite(v)):
                raise ValueError(f"view {i} contains NaN/Inf entries")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=_LABEL_DTYPE)
            if self.labels.shape != (n,):
                raise ValueError(
                    f"labels must have {n} entries, got {self.labels.shape}"
                )
        if self.view_names is not None and len(self.view_names) != len(self.views):
            raise ValueError("view_names length must match the view count")

    @property
    def n_views(self):
        return len(self.views)

    @property
    def n_samples(self):
        return self.views[0].shape[1]

    @property
    def view_dims(self):
        return tuple(v.shape[0] for v in self.views)


@dataclass(frozen=True)
class SimilarityMatrix:
    """Cosine-derived similarity between samples of view p and view q."""

    p: int
    q: int
    s: np.ndarray


@dataclass(frozen=True)
class AugmentedMatrix:
    """Block matrix of shape d x (v*n): raw views on the diagonal blocks,
    similarity-weighted cross products elsewhere."""

    xa: np.ndarray
    block_rows: tuple  # row offset of each view block
    block_cols: tuple  # column offset of each view block
    pca_dim: int

    @property
    def n_views(self):
        return len(self.block_rows)

    @property
    def n_samples(self):
        return self.xa.shape[1] // len(self.block_cols)

    @property
    def view_dims(self):
        bounds = (*self.block_rows, self.xa.shape[0])
        return tuple(bounds[i + 1] - bounds[i] for i in range(self.n_views))

    def block(self, p, q):
        """The (p, q) block, shape d_p x n."""
        r0 = self.block_rows[p]
        r1 = r0 + self.view_dims[p]
        c0 = self.block_cols[q]
        return self.xa[r0:r1, c0:c0 + self.n_samples]


def _normalize_columns(x):
    norms = np.linalg.norm(x, axis=0)
    out = np.zeros_like(x)
    nz = norms > 0
    out[:, nz] = x[:, nz] / norms[nz]
    return out


def cosine_similarity(xp, xq, p=0, q=1):
    """Similarity block between two dimension-aligned views.

    Entry (i, j) maps the cosine of sample i of the first view against
    sample j of the second into [0, 1] via cos/2 + 1/2. Zero-norm samples
    contribute the neutral value 1/2.
    """
    xp = np.asarray(xp, dtype=np.float64)
    xq = np.asarray(xq, dtype=np.float64)
    if xp.shape[0] != xq.shape[0]:
        raise ValueError(
            f"views must share the feature dimension, got {xp.shape[0]} and {xq.shape[0]}"
        )
    if xp.shape[1] != xq.shape[1]:
        raise ValueError(
            f"views must share the sample count, got {xp.shape[1]} and {xq.shape[1]}"
        )
    s = 0.5 * (_normalize_columns(xp).T @ _normalize_columns(xq)) + 0.5
    np.clip(s, 0.0, 1.0, out=s)  # guard rounding excursions outside [0, 1]
    return SimilarityMatrix(p=p, q=q, s=s)


def build_augmented(ds, pca_components, identity_similarity=False):
    """Assemble the augmented data matrix from a multi-view dataset.

    Views are PCA-aligned to `pca_components` dimensions to make cross-view
    cosine similarity well defined; each off-diagonal block (p, q) is
    view_p @ S(p, q), each diagonal block is the raw view. With
    `identity_similarity` every S(p, q) is forced to the identity (test hook:
    every block in block-row p then repeats view p exactly).
    """
    limit = min(min(v.shape[0], v.shape[1] - 1) for v in ds.views)
    if not 1 <= pca_components <= limit:
        raise ValueError(
            f"pca_components={pca_components} invalid for this dataset; "
            f"use a value in [1, {limit}]"
        )
    v, n = ds.n_views, ds.n_samples
    if not identity_similarity and v > 1:
        aligned = [pca_reduce(x, pca_components)[0] for x in ds.views]
        sim = {}
        for p in range(v):
            for q in range(p + 1, v):
                s = cosine_similarity(aligned[p], aligned[q], p, q).s
                sim[(p, q)] = s
                sim[(q, p)] = s.T
    else:
        sim = None

    dims = ds.view_dims
    row_off = tuple(int(x) for x in np.concatenate([[0], np.cumsum(dims)[:-1]]))
    col_off = tuple(i * n for i in range(v))
    xa = np.empty((sum(dims), v * n))
    for p in range(v):
        r0, r1 = row_off[p], row_off[p] + dims[p]
        for q in range(v):
            c0 = col_off[q]
            if p == q or sim is None:
                xa[r0:r1, c0:c0 + n] = ds.views[p]
            else:
                xa[r0:r1, c0:c0 + n] = ds.views[p] @ sim[(p, q)]
    return AugmentedMatrix(
        xa=xa, block_rows=row_off, block_cols=col_off, pca_dim=pca_components
    )


def default_pca_components(clusters, ds):
    """Component count for view alignment: 6 per cluster, clipped to validity."""
    if clusters < 1:
        raise ValueError(f"clusters must be positive, got {clusters}")
    return min(clusters * 6, ds.n_samples - 1, min(ds.view_dims))


def gen_synthetic(clusters, per_cluster, views, latent_dim, view_dims,
                  noise_sigma, seed):
    """Generate a labeled multi-view dataset from a shared latent space.

    Cluster centers are drawn in the latent space; each cluster's points vary
    within a private low-dimensional subspace around its center (about a third
    of the latent dimensions), so without noise every cluster's samples occupy
    a distinct affine subspace in every view. Each view applies its own random
    linear map plus Gaussian noise of scale `noise_sigma`.
    """
    if views != len(view_dims):
        raise ValueError(f"views={views} but {len(view_dims)} view_dims given")
    if clusters < 1 or per_cluster < 1 or latent_dim < 1:
        raise ValueError("clusters, per_cluster, and latent_dim must be positive")
    if latent_dim > min(view_dims):
        raise ValueError(
            f"latent_dim={latent_dim} exceeds the smallest view dimension "
            f"{min(view_dims)}"
        )
    if noise_sigma < 0:
        raise ValueError(f"noise_sigma must be nonnegative, got {noise_sigma}")

    rng = rng_from(seed)
    sub_dim = max(1, latent_dim // 3)
    n = clusters * per_cluster
    latent = np.empty((latent_dim, n))
    labels = np.repeat(np.arange(clusters, dtype=_LABEL_DTYPE), per_cluster)
    for c in range(clusters):
        center = 4.0 * rng.standard_normal(latent_dim)
        basis = np.linalg.qr(rng.standard_normal((latent_dim, sub_dim)))[0]
        coefs = rng.standard_normal((sub_dim, per_cluster))
        latent[:, c * per_cluster:(c + 1) * per_cluster] = (
            center[:, None] + basis @ coefs
        )

    out = []
    for dim in view_dims:
        w = rng.standard_normal((dim, latent_dim)) / np.sqrt(latent_dim)
        x = w @ latent
        if noise_sigma > 0:
            x = x + noise_sigma * rng.standard_normal(x.shape)
        out.append(x)
    names = [f"view{i}" for i in range(views)]
    return MultiViewDataset(views=out, labels=labels, view_names=names)


def _load_matrix(path, view_name):
    try:
        with open(path) as fh:
            first = fh.readline()
        delim = "," if "," in first else None
        mat = np.loadtxt(path, delimiter=delim, ndmin=2)
    except OSError as exc:
        raise DatasetError(f"view '{view_name}': cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise DatasetError(
            f"view '{view_name}': non-numeric or ragged data in {path}: {exc}"
        ) from exc
    return mat


def load_dataset(manifest_path):
    """Load a dataset described by a JSON manifest.

    The manifest declares `n`, an ordered `views` list (name, path, rows,
    cols), and an optional `labels` path; matrix paths are resolved relative
    to the manifest. Matrix files are plain numeric text, one row per line,
    comma- or whitespace-separated; the labels file holds one nonnegative
    integer per line.
    """
    manifest_path = Path(manifest_path)
    try:
        spec = json.loads(manifest_path.read_text())
    except OSError as exc:
        raise DatasetError(f"cannot read manifest {manifest_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DatasetError(f"manifest {manifest_path} is not valid JSON: {exc}") from exc

    if "n" not in spec or "views" not in spec or not spec["views"]:
        raise DatasetError(f"manifest {manifest_path} must declare 'n' and 'views'")
    base = manifest_path.parent
    n = int(spec["n"])
    views, names = [], []
    for entry in spec["views"]:
        name = entry.get("name", entry["path"])
        mat = _load_matrix(base / entry["path"], name)
        declared = (int(entry["rows"]), int(entry["cols"]))
        if mat.shape != declared:
            raise DatasetError(
                f"view '{name}': file shape {mat.shape} does not match "
                f"declared rows x cols {declared}"
            )
        if mat.shape[1] != n:
            raise DatasetError(
                f"view '{name}': {mat.shape[1]} samples but manifest declares n={n}"
            )
        views.append(mat)
        names.append(name)

    labels = None
    if spec.get("labels"):
        path = base / spec["labels"]
        try:
            labels = np.loadtxt(path, dtype=_LABEL_DTYPE, ndmin=1)
        except OSError as exc:
            raise DatasetError(f"cannot read labels file {path}: {exc}") from exc
        except ValueError as exc:
            raise DatasetError(f"labels file {path} is not integer-valued: {exc}") from exc
        if labels.shape != (n,):
            raise DatasetError(
                f"labels file {path} has {labels.shape[0]} entries, expected {n}"
            )
        if (labels < 0).any():
            raise DatasetError(f"labels file {path} contains negative labels")
    try:
        return MultiViewDataset(views=views, labels=labels, view_names=names)
    except ValueError as exc:
        raise DatasetError(str(exc)) from exc
