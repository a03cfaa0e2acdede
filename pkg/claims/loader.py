from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import List

from kripke.loader import load_model_file
from kripke.models import BiModel
from proofs.derivation import Derivation, load_derivation_file
from utils.logger import get_logger

log = get_logger(__name__)

_SECTIONS = {"models": "*.json", "derivations": "*.drv", "manifests": "*.json"}


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str
    path: Path

    def relative(self, root: Path) -> str:
        return self.path.relative_to(root).as_posix()


class CorpusIndex:
    """Индекс корпуса: models/, derivations/, manifests/ внутри corpus_dir."""

    def __init__(self, corpus_dir: Path):
        self.corpus_dir = Path(corpus_dir)
        self._index: dict[str, dict[str, CorpusEntry]] = {k: {} for k in _SECTIONS}
        self._models: dict[Path, BiModel] = {}
        self._derivations: dict[Path, Derivation] = {}
        self._scan()

    def _scan(self) -> None:
        for section in self._index.values():
            section.clear()
        if not self.corpus_dir.exists():
            log.warning(f"Corpus dir not found: {self.corpus_dir}")
            return
        for kind, pattern in _SECTIONS.items():
            for p in sorted((self.corpus_dir / kind).glob(pattern)):
                self._index[kind][p.stem] = CorpusEntry(name=p.stem, kind=kind, path=p)
        log.debug(
            "Corpus indexed: "
            + ", ".join(f"{len(v)} {k}" for k, v in self._index.items())
        )

    def entries(self, kind: str) -> List[CorpusEntry]:
        return list(self._index[kind].values())

    def manifests(self) -> List[CorpusEntry]:
        return self.entries("manifests")

    def find_manifest(self, name: str) -> CorpusEntry:
        """По имени без расширения или по пути."""
        stem = Path(name).stem
        entry = self._index["manifests"].get(stem)
        if entry is None:
            raise FileNotFoundError(f"manifest not found: {name}")
        return entry

    def resolve(self, ref: str) -> Path:
        """Пути в манифестах считаются от корня корпуса."""
        p = Path(ref)
        return p if p.is_absolute() else self.corpus_dir / p

    def model(self, ref: str) -> BiModel:
        path = self.resolve(ref)
        if path not in self._models:
            self._models[path] = load_model_file(path)
        return self._models[path]

    def derivation(self, ref: str) -> Derivation:
        path = self.resolve(ref)
        if path not in self._derivations:
            self._derivations[path] = load_derivation_file(path)
        return self._derivations[path]
