"""Pipeline configuration with a plain ``key = value`` text form."""

from dataclasses import asdict, dataclass, fields
import hashlib
import json

_BOOL = {"on": True, "true": True, "1": True, "yes": True,
         "off": False, "false": False, "0": False, "no": False}


def parse_bool(text):
    if isinstance(text, bool):
        return text
    try:
        return _BOOL[str(text).strip().lower()]
    except KeyError:
        raise ValueError(f"expected on/off, got {text!r}") from None


def parse_config_text(text):
    """Parse ``key = value`` lines; ``#`` starts a comment. Keys are normalised to underscores."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


@dataclass
class PipelineConfig:
    wavelet: str = "d4"
    depth: int = 3
    refilter: bool = True
    keep: str = "all"
    threshold: float = 3.09
    seed: int = 0
    input: str = ""
    output: str = ""

    _PATHS = ("input", "output")

    def to_text(self):
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                value = "on" if value else "off"
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        values = parse_config_text(text)
        known = {f.name: f.type for f in fields(cls)}
        unknown = sorted(set(values) - set(known))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        kw = {}
        for key, value in values.items():
            if key == "refilter":
                kw[key] = parse_bool(value)
            elif key in ("depth", "seed"):
                kw[key] = int(value)
            elif key == "threshold":
                kw[key] = float(value)
            else:
                kw[key] = value
        return cls(**kw)

    def hash(self, **extra):
        """Short digest of the computational settings (paths excluded) plus ``extra``."""
        payload = {k: v for k, v in asdict(self).items() if k not in self._PATHS}
        payload.update(extra)
        blob = json.dumps(payload, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]
