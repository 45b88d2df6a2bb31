"""
ArtifactStore reads and writes the files of one run directory.
"""

import csv
import hashlib
import json
import platform
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import scipy

from .. import __version__
from ..spectral import SpectralField
from .errors import ArtifactError
from .field_file import load_field, save_field


class ArtifactStore:
    """
    ArtifactStore owns a run directory: field files, JSON reports, CSV tables and the manifest.

    Writes are deterministic: JSON keys are sorted and floats are written at full precision, so identical
    runs produce byte-identical files.

    Attributes
    ----------
    logger : logging.Logger
        Receives one line per artifact.
    root : Path
        The run directory.

    Methods
    -------
    write_field(name, field) / read_field(name)
        Field files.
    write_json(name, payload) / read_json(name)
        JSON documents.
    write_csv(name, columns, rows) / read_csv(name)
        Tables with a header row.
    require(names)
        Fails with ArtifactError listing every missing artifact.
    write_manifest(config)
        Records the configuration hash, versions and the SHA-256 of every artifact.
    """

    _MANIFEST = 'manifest.json'

    def __init__(self, logger, root: Union[str, Path]):
        self.logger = logger
        self._root = Path(root)

    @property
    def root(self) -> Path:
        return self._root

    @property
    def manifest_path(self) -> Path:
        return self._root / ArtifactStore._MANIFEST

    @property
    def versions(self) -> dict:
        return {
            'hartree_solvers': __version__,
            'numpy': np.__version__,
            'scipy': scipy.__version__,
            'python': platform.python_version(),
        }

    def path(self, name: str) -> Path:
        return self._root / name

    def ensure(self) -> Path:
        try:
            self._root.mkdir(parents=True, exist_ok=True)
        except OSError as error:
            raise ArtifactError(f'Cannot create the run directory {self._root}: {error}') from error
        return self._root

    def require(self, names: Iterable[str]) -> None:
        if not self._root.is_dir():
            raise ArtifactError(f'{self._root} is not a directory')
        missing = [name for name in names if not self.path(name).is_file()]
        if missing:
            raise ArtifactError(f'Missing artifacts in {self._root}: {missing}')

    def write_field(self, name: str, field: SpectralField, binary: bool = False) -> Path:
        path = save_field(field, self.path(name), binary)
        self.logger.info(f'Wrote {path}')
        return path

    def read_field(self, name: str) -> SpectralField:
        return load_field(self.path(name))

    def write_json(self, name: str, payload: dict) -> Path:
        path = self.path(name)
        try:
            path.write_text(json.dumps(payload, sort_keys=True, indent=2) + '\n', encoding='utf-8')
        except OSError as error:
            raise ArtifactError(f'Cannot write {path}: {error}') from error
        self.logger.info(f'Wrote {path}')
        return path

    def read_json(self, name: str) -> dict:
        path = self.path(name)
        try:
            return json.loads(path.read_text(encoding='utf-8'))
        except OSError as error:
            raise ArtifactError(f'Cannot read {path}: {error}') from error
        except json.JSONDecodeError as error:
            raise ArtifactError(f'{path} is not valid JSON: {error}') from error

    def write_csv(self, name: str, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
        path = self.path(name)
        try:
            with path.open('w', newline='', encoding='utf-8') as handle:
                writer = csv.writer(handle, lineterminator='\n')
                writer.writerow(columns)
                for row in rows:
                    writer.writerow([repr(float(value)) if isinstance(value, (float, np.floating)) else value
                                     for value in row])
        except OSError as error:
            raise ArtifactError(f'Cannot write {path}: {error}') from error
        self.logger.info(f'Wrote {path}')
        return path

    def read_csv(self, name: str) -> list:
        path = self.path(name)
        try:
            with path.open(newline='', encoding='utf-8') as handle:
                return list(csv.DictReader(handle))
        except OSError as error:
            raise ArtifactError(f'Cannot read {path}: {error}') from error

    def digest(self, name: str) -> str:
        return hashlib.sha256(self.path(name).read_bytes()).hexdigest()

    def write_manifest(self, config, artifacts: Sequence[str], summary: Optional[dict] = None) -> Path:
        """
        Writes manifest.json.

        Parameters
        ----------
        config : RunConfig
            The validated configuration of the run.
        artifacts : Sequence[str]
            Names of the artifacts to fingerprint.
        summary : dict, optional
            Headline results of the run.

        Returns
        -------
        Path
            The manifest path.
        """

        self.require(artifacts)
        manifest = {
            'config': config.to_dict(),
            'config_sha256': config.digest(),
            'versions': self.versions,
            'artifacts': {name: self.digest(name) for name in sorted(artifacts)},
            'summary': summary or {},
        }
        return self.write_json(ArtifactStore._MANIFEST, manifest)
