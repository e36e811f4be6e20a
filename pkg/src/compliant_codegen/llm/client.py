"""Chat-completion client with a content-addressed replay cache."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import httpx

log = logging.getLogger(__name__)

ENDPOINT_ENV = "CODEGEN_LLM_ENDPOINT"
MODEL_ENV = "CODEGEN_LLM_MODEL"
TOKEN_ENV = "CODEGEN_LLM_TOKEN"
CACHE_ENV = "CODEGEN_LLM_CACHE"
DEFAULT_MODEL = "gpt-4"

SHIPPED_CACHE = Path(__file__).resolve().parent.parent / "data" / "replay_cache"


class GenerationUnavailable(RuntimeError):
    """No cached response and no reachable endpoint."""


def _default_cache() -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else SHIPPED_CACHE


@dataclass(frozen=True)
class GenerationConfig:
    num_samples: int = 5
    temperature: float = 0.0
    max_tokens: int = 512 * 3
    endpoint: str | None = field(default_factory=lambda: os.environ.get(ENDPOINT_ENV) or None)
    model: str = field(default_factory=lambda: os.environ.get(MODEL_ENV) or DEFAULT_MODEL)
    cache_path: Path = field(default_factory=_default_cache)
    timeout_s: float = 120.0

    def __post_init__(self):
        if not isinstance(self.num_samples, int) or self.num_samples < 1:
            raise ValueError(f"num_samples must be an integer >= 1, got {self.num_samples!r}")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be >= 1")
        if not self.temperature >= 0:
            raise ValueError("temperature must be >= 0")
        object.__setattr__(self, "cache_path", Path(self.cache_path))


def cache_key(prompt: str, index: int, model: str, temperature: float) -> str:
    blob = json.dumps([prompt, int(index), model, float(temperature)], ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class ReplayCache:
    """One JSON file per (prompt, sample index, model, temperature).

    Reads are lock-free; writes go through a temp file and ``os.replace`` so a
    reader never sees a partial entry.
    """

    def __init__(self, root):
        self.root = Path(root)
        self._lock = threading.Lock()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, prompt, index, model, temperature) -> str | None:
        p = self._path(cache_key(prompt, index, model, temperature))
        try:
            with open(p, encoding="utf-8") as fh:
                return json.load(fh)["response"]
        except FileNotFoundError:
            return None

    def put(self, prompt, index, model, temperature, response: str) -> Path:
        key = cache_key(prompt, index, model, temperature)
        p = self._path(key)
        entry = {
            "key": key,
            "prompt_sha256": hashlib.sha256(prompt.encode("utf-8")).hexdigest(),
            "index": int(index),
            "model": model,
            "temperature": float(temperature),
            "response": response,
        }
        with self._lock:
            p.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=p.parent, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    json.dump(entry, fh, indent=1, sort_keys=True)
                    fh.write("\n")
                os.replace(tmp, p)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        return p


class ChatClient:
    """Single-message chat requests against an OpenAI-style endpoint."""

    def __init__(self, endpoint: str, model: str, token: str | None = None, max_tokens: int = 1536,
                 temperature: float = 0.0, timeout_s: float = 120.0, attempts: int = 3,
                 backoff_s: float = 1.0, transport: httpx.BaseTransport | None = None):
        self.endpoint = endpoint
        self.model = model
        self.max_tokens = max_tokens
        self.temperature = temperature
        self.attempts = attempts
        self.backoff_s = backoff_s
        headers = {"Content-Type": "application/json"}
        if token:
            headers["Authorization"] = f"Bearer {token}"
        self._http = httpx.Client(timeout=timeout_s, headers=headers, transport=transport)

    def close(self):
        self._http.close()

    def complete(self, prompt: str) -> str:
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }
        last = None
        for attempt in range(self.attempts):
            try:
                r = self._http.post(self.endpoint, json=body)
                if r.status_code == 429 or r.status_code >= 500:
                    raise httpx.HTTPStatusError(f"transient status {r.status_code}", request=r.request, response=r)
                r.raise_for_status()
                return r.json()["choices"][0]["message"]["content"]
            except (httpx.TransportError, httpx.HTTPStatusError) as e:
                last = e
                transient = not isinstance(e, httpx.HTTPStatusError) or (
                    e.response.status_code == 429 or e.response.status_code >= 500
                )
                if not transient:
                    break
                if attempt + 1 < self.attempts:
                    delay = self.backoff_s * 2 ** attempt
                    log.warning("chat request failed (%s), retrying in %.1fs", e, delay)
                    time.sleep(delay)
            except (KeyError, IndexError, ValueError) as e:
                raise GenerationUnavailable(f"malformed chat response: {e}") from e
        raise GenerationUnavailable(f"chat endpoint failed after {self.attempts} attempts: {last}")


def client_from_config(cfg: GenerationConfig, **kw) -> ChatClient | None:
    if not cfg.endpoint:
        return None
    return ChatClient(cfg.endpoint, cfg.model, os.environ.get(TOKEN_ENV), cfg.max_tokens,
                      cfg.temperature, cfg.timeout_s, **kw)


def generate_candidates(prompt: str, cfg: GenerationConfig, client: ChatClient | None = None,
                        start_index: int = 0) -> list[str]:
    """Return ``cfg.num_samples`` responses, replaying cached ones.

    Every fresh response is stored before returning. A miss with no endpoint
    raises ``GenerationUnavailable`` without touching the network.
    """
    cache = ReplayCache(cfg.cache_path)
    out = []
    owned = None
    try:
        for i in range(start_index, start_index + cfg.num_samples):
            hit = cache.get(prompt, i, cfg.model, cfg.temperature)
            if hit is not None:
                out.append(hit)
                continue
            if client is None:
                owned = owned or client_from_config(cfg)
                if owned is None:
                    raise GenerationUnavailable(
                        f"sample {i} is not cached in {cfg.cache_path} and {ENDPOINT_ENV} is not set"
                    )
            text = (client or owned).complete(prompt)
            cache.put(prompt, i, cfg.model, cfg.temperature, text)
            out.append(text)
    finally:
        if owned is not None:
            owned.close()
    return out


def completer(cfg: GenerationConfig, client: ChatClient | None = None):
    """A ``prompt -> text`` callable backed by sample 0 of the cache (used by the probes)."""
    one = GenerationConfig(1, cfg.temperature, cfg.max_tokens, cfg.endpoint, cfg.model, cfg.cache_path, cfg.timeout_s)

    def call(prompt: str) -> str:
        return generate_candidates(prompt, one, client)[0]

    return call
