"""Token and sentence embedding providers behind one contract.

Providers are deterministic for a fixed configuration and safe to share
across threads for read-only embed calls. Sentence vectors default to the
mean of the word-token vectors, so any token provider also embeds
sentences. An ``EmbeddingStore`` is a binary, offline cache of vectors;
the remote provider fills one transparently so runs can be replayed with
no network.
"""

from __future__ import annotations

import hashlib
import json
import struct
import threading
import urllib.error
import urllib.request

import numpy as np

from .text import SubwordVocab, word_tokenize

STORE_MAGIC = b"EMBV1\x00"


class EmbeddingError(RuntimeError):
    """Provider failure; ``index`` points at the offending input text."""

    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


def cosine_similarity(u, v) -> float:
    """u.v / (|u||v|); raises on dimension mismatch or a zero vector."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.dot(u, v) / (nu * nv))


def content_key(mode: str, text: str) -> str:
    """Stable cache key for one (mode, text) pair."""
    digest = hashlib.sha256(f"{mode}\x00{text}".encode("utf-8")).hexdigest()
    return f"{mode}:{digest}"


class Provider:
    """Embedding provider contract.

    Subclasses set ``name``, ``dimension`` and ``mode`` ("token",
    "sentence" or "both") and implement the embed method(s) for their mode.
    ``embed_sentences`` falls back to mean pooling of word-token vectors,
    so token-mode providers embed sentences too.
    """

    name: str = "provider"
    dimension: int | None = None
    mode: str = "both"

    def embed_tokens(self, tokens: list[str]) -> np.ndarray:
        raise EmbeddingError(f"provider {self.name!r} does not embed tokens")

    def embed_sentences(self, sentences: list[str]) -> np.ndarray:
        if self.mode == "sentence":
            raise NotImplementedError
        vectors = []
        for i, sentence in enumerate(sentences):
            tokens = word_tokenize(sentence)
            if not tokens:
                raise EmbeddingError(f"sentence {i}: no tokens to pool", index=i)
            vectors.append(np.mean(self.embed_tokens(tokens), axis=0))
        if not vectors:
            return np.zeros((0, self.dimension or 0), dtype=float)
        return np.stack(vectors)


def embed_sentences(provider: Provider, sentences: list[str]) -> np.ndarray:
    """One vector per sentence, order preserved, uniform dimension."""
    out = np.asarray(provider.embed_sentences(list(sentences)), dtype=float)
    if len(sentences) == 0:
        return out.reshape(0, provider.dimension or 0)
    if out.shape[0] != len(sentences):
        raise EmbeddingError(
            f"provider {provider.name!r} returned {out.shape[0]} vectors for {len(sentences)} sentences"
        )
    if provider.dimension is not None and out.shape[1] != provider.dimension:
        raise EmbeddingError(
            f"provider {provider.name!r} returned dimension {out.shape[1]}, expected {provider.dimension}"
        )
    return out


class OneHotProvider(Provider):
    """Deterministic test provider: token -> standard basis vector.

    A token maps to the basis vector of its exact piece id; tokens absent
    from the vocabulary map to the unknown piece's basis vector. Sentences
    are mean-pooled token vectors.
    """

    mode = "both"

    def __init__(self, vocab: SubwordVocab) -> None:
        self.vocab = vocab
        self.dimension = len(vocab)
        self.name = f"onehot-{self.dimension}"

    def embed_tokens(self, tokens: list[str]) -> np.ndarray:
        out = np.zeros((len(tokens), self.dimension), dtype=float)
        for i, tok in enumerate(tokens):
            pid = self.vocab.piece_id(tok)
            out[i, pid if pid is not None else self.vocab.unk_id] = 1.0
        return out


def onehot_provider(vocab: SubwordVocab) -> OneHotProvider:
    return OneHotProvider(vocab)


class EmbeddingStore:
    """Keyed float32 vectors of one dimension, with a bit-exact file format.

    Layout: magic ``EMBV1\\0``, u32-LE row count, u32-LE dimension, then
    rows*dim float32-LE values row-major, then one u32-LE-length-prefixed
    UTF-8 key per row. Insertion order is preserved and equals file row
    order.
    """

    def __init__(self, dimension: int) -> None:
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self.entries: dict[str, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def get(self, key: str) -> np.ndarray | None:
        return self.entries.get(key)

    def put(self, key: str, vector) -> None:
        vec = np.asarray(vector, dtype=np.float32).reshape(-1)
        if vec.shape[0] != self.dimension:
            raise ValueError(f"vector for {key!r} has dimension {vec.shape[0]}, store is {self.dimension}")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"vector for {key!r} has non-finite entries")
        if key in self.entries:
            raise ValueError(f"duplicate key {key!r}")
        self.entries[key] = vec

    def keys(self) -> list[str]:
        return list(self.entries.keys())

    def matrix(self) -> np.ndarray:
        """Rows in insertion order as one (rows, dim) float32 array."""
        if not self.entries:
            return np.zeros((0, self.dimension), dtype=np.float32)
        return np.stack(list(self.entries.values()))

    def save(self, path: str) -> None:
        mat = self.matrix()
        with open(path, "wb") as fh:
            fh.write(STORE_MAGIC)
            fh.write(struct.pack("<II", mat.shape[0], self.dimension))
            fh.write(mat.astype("<f4", copy=False).tobytes())
            for key in self.entries:
                encoded = key.encode("utf-8")
                fh.write(struct.pack("<I", len(encoded)))
                fh.write(encoded)

    @classmethod
    def load(cls, path: str) -> "EmbeddingStore":
        with open(path, "rb") as fh:
            data = fh.read()
        if data[: len(STORE_MAGIC)] != STORE_MAGIC:
            raise ValueError(f"{path}: bad magic bytes")
        offset = len(STORE_MAGIC)
        if len(data) < offset + 8:
            raise ValueError(f"{path}: truncated header")
        rows, dim = struct.unpack_from("<II", data, offset)
        offset += 8
        if dim < 1:
            raise ValueError(f"{path}: dimension must be >= 1")
        payload = rows * dim * 4
        if len(data) < offset + payload:
            raise ValueError(f"{path}: truncated payload ({len(data) - offset} of {payload} bytes)")
        mat = np.frombuffer(data, dtype="<f4", count=rows * dim, offset=offset).reshape(rows, dim)
        if not np.all(np.isfinite(mat)):
            raise ValueError(f"{path}: non-finite vector entries")
        offset += payload
        store = cls(dim)
        for row in range(rows):
            if len(data) < offset + 4:
                raise ValueError(f"{path}: truncated key index at row {row}")
            (klen,) = struct.unpack_from("<I", data, offset)
            offset += 4
            if len(data) < offset + klen:
                raise ValueError(f"{path}: truncated key at row {row}")
            key = data[offset : offset + klen].decode("utf-8")
            offset += klen
            store.put(key, mat[row])
        return store


def load_store(path: str) -> EmbeddingStore:
    return EmbeddingStore.load(path)


class StoreProvider(Provider):
    """Replays vectors from an :class:`EmbeddingStore`, keyed by content hash.

    The keys match what :class:`RemoteProvider` writes, so a remote run's
    cache file replays offline. A missing key raises with the text's index.
    """

    def __init__(self, store: EmbeddingStore, name: str = "store") -> None:
        self.store = store
        self.dimension = store.dimension
        self.name = name
        self.mode = "both"

    def _lookup(self, mode: str, texts: list[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dimension), dtype=float)
        for i, text in enumerate(texts):
            vec = self.store.get(content_key(mode, text))
            if vec is None:
                raise EmbeddingError(f"{mode} {i}: no cached vector for {text!r}", index=i)
            out[i] = vec
        return out

    def embed_tokens(self, tokens: list[str]) -> np.ndarray:
        return self._lookup("token", tokens)

    def embed_sentences(self, sentences: list[str]) -> np.ndarray:
        return self._lookup("sentence", sentences)


class RemoteProvider(Provider):
    """Client for an external embedding service.

    Wire protocol: POST ``/embed`` with JSON ``{"texts": [...], "mode":
    "sentence"|"token"}``; response ``{"dim": d, "vectors": [[...], ...]}``.
    Responses are cached in an :class:`EmbeddingStore` keyed by content
    hash; identical requests are served from the cache with no network
    call. Dimension drift between responses is an error.
    """

    def __init__(
        self,
        endpoint: str,
        cache_path: str | None = None,
        retries: int = 2,
        timeout: float = 10.0,
        name: str | None = None,
    ) -> None:
        self.endpoint = endpoint.rstrip("/")
        self.cache_path = cache_path
        self.retries = retries
        self.timeout = timeout
        self.name = name or f"remote:{self.endpoint}"
        self.mode = "both"
        self.dimension: int | None = None
        self._cache: EmbeddingStore | None = None
        self._lock = threading.Lock()
        if cache_path is not None:
            try:
                self._cache = EmbeddingStore.load(cache_path)
                self.dimension = self._cache.dimension
            except FileNotFoundError:
                self._cache = None

    def _post(self, texts: list[str], mode: str, first_index: int) -> list[list[float]]:
        body = json.dumps({"texts": texts, "mode": mode}).encode("utf-8")
        request = urllib.request.Request(
            self.endpoint + "/embed",
            data=body,
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        attempts = self.retries + 1
        last_error: Exception | None = None
        for _ in range(attempts):
            try:
                with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                    payload = json.loads(resp.read().decode("utf-8"))
                break
            except (urllib.error.URLError, OSError, json.JSONDecodeError) as exc:
                last_error = exc
        else:
            raise EmbeddingError(
                f"{mode} {first_index}: embedding service unreachable after {attempts} attempts: {last_error}",
                index=first_index,
            )
        if "dim" not in payload or "vectors" not in payload:
            raise EmbeddingError(f"{mode} {first_index}: malformed response body", index=first_index)
        vectors = payload["vectors"]
        if len(vectors) != len(texts):
            raise EmbeddingError(
                f"{mode} {first_index}: service returned {len(vectors)} vectors for {len(texts)} texts",
                index=first_index,
            )
        dim = int(payload["dim"])
        with self._lock:
            if self.dimension is None:
                self.dimension = dim
            elif dim != self.dimension:
                raise EmbeddingError(
                    f"{mode} {first_index}: dimension drift, got {dim} expected {self.dimension}",
                    index=first_index,
                )
        return vectors

    def _embed(self, texts: list[str], mode: str) -> np.ndarray:
        keys = [content_key(mode, t) for t in texts]
        with self._lock:
            cache = self._cache
            missing = [i for i, k in enumerate(keys) if cache is None or k not in cache]
        if missing:
            fetched = self._post([texts[i] for i in missing], mode, first_index=missing[0])
            with self._lock:
                if self._cache is None:
                    assert self.dimension is not None
                    self._cache = EmbeddingStore(self.dimension)
                for i, vec in zip(missing, fetched):
                    if keys[i] not in self._cache:
                        self._cache.put(keys[i], vec)
                if self.cache_path is not None:
                    self._cache.save(self.cache_path)
        assert self._cache is not None
        out = np.zeros((len(texts), self._cache.dimension), dtype=float)
        for i, key in enumerate(keys):
            vec = self._cache.get(key)
            if vec is None:
                raise EmbeddingError(f"{mode} {i}: vector missing after fetch", index=i)
            out[i] = vec
        return out

    def embed_tokens(self, tokens: list[str]) -> np.ndarray:
        return self._embed(tokens, "token")

    def embed_sentences(self, sentences: list[str]) -> np.ndarray:
        if not sentences:
            return np.zeros((0, self.dimension or 0), dtype=float)
        return self._embed(sentences, "sentence")


def remote_provider(endpoint: str, cache_path: str | None = None, **kwargs) -> RemoteProvider:
    return RemoteProvider(endpoint, cache_path=cache_path, **kwargs)


def make_provider(
    spec: str,
    vocab: SubwordVocab | None = None,
    cache_path: str | None = None,
) -> Provider:
    """Build a provider from a CLI spec string.

    ``onehot`` (requires a vocabulary), ``store:<path>`` for a cached
    store, ``remote:<url>`` for an embedding service.
    """
    if spec == "onehot":
        if vocab is None:
            raise ValueError("the onehot provider requires a vocabulary")
        return OneHotProvider(vocab)
    if spec.startswith("store:"):
        return StoreProvider(EmbeddingStore.load(spec[len("store:") :]))
    if spec.startswith("remote:"):
        return RemoteProvider(spec[len("remote:") :], cache_path=cache_path)
    raise ValueError(f"unknown provider spec {spec!r}")
