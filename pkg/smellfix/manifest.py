import pathlib
from dataclasses import dataclass
from typing import List, Optional

from monty.json import MontyDecoder, MSONable
from monty.serialization import loadfn

from smellfix import __version__
from smellfix.backends import BackendDescriptor
from smellfix.general_utils import sha256_file, stable_digest, to_json, utc_timestamp


@dataclass
class RunManifest(MSONable):
    """Links a fix run to the profile, snippets and backend that produced it."""
    run_id: str
    profile_hash: str
    snippet_manifest: str
    snippet_manifest_sha256: str
    backend: BackendDescriptor
    tiers: List[str]
    started: str
    finished: Optional[str] = None
    tool_version: str = __version__
    config_hash: str = ''
    attempts_store: Optional[str] = None

    def __post_init__(self):
        if isinstance(self.backend, dict):
            self.backend = MontyDecoder().process_decoded(self.backend)
        self.tiers = list(self.tiers)

    def finish(self):
        self.finished = utc_timestamp()
        return self


def start_run(profile_hash, snippet_manifest, backend, tiers, config_hash='', attempts_store=None):
    snippet_sha = sha256_file(snippet_manifest)
    run_id = stable_digest(dict(profile_hash=profile_hash,
                                snippet_manifest_sha256=snippet_sha,
                                backend=backend.as_dict(),
                                tiers=list(tiers),
                                config_hash=config_hash,
                                tool_version=__version__))
    return RunManifest(run_id=run_id,
                       profile_hash=profile_hash,
                       snippet_manifest=str(snippet_manifest),
                       snippet_manifest_sha256=snippet_sha,
                       backend=backend,
                       tiers=list(tiers),
                       started=utc_timestamp(),
                       config_hash=config_hash,
                       attempts_store=str(attempts_store) if attempts_store else None)


def write_run_manifest(manifest, path):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(manifest, indent=2) + '\n', encoding='utf-8')
    return path


def read_run_manifest(path):
    document = loadfn(str(path))
    return document if isinstance(document, RunManifest) else RunManifest.from_dict(document)
