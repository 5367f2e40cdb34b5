"""Key files and attack transcripts."""
import json
from dataclasses import asdict, dataclass, field

from .cipher import SecretKey
from .errors import ParseError

TRANSCRIPT_FORMAT = "mckba-transcript/1"
CHUNK = 8


def format_key(key):
    lines = [f"n={key.n}", f"key1={key.key1}", f"key2={key.key2}", f"x0_raw={key.x0}"]
    if key.canonical:
        lines.append("canonical=1")
    return "\n".join(lines) + "\n"


def parse_key(text):
    fields = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"line {lineno}: expected name=value")
        try:
            fields[name.strip()] = int(value.strip())
        except ValueError:
            raise ParseError(f"line {lineno}: {value.strip()!r} is not an integer") from None
    missing = {"n", "key1", "key2", "x0_raw"} - fields.keys()
    if missing:
        raise ParseError(f"key file lacks {', '.join(sorted(missing))}")
    return SecretKey(fields["n"], fields["key1"], fields["key2"], fields["x0_raw"],
                     canonical=bool(fields.get("canonical", 0)))


def read_key(path):
    with open(path) as fh:
        return parse_key(fh.read())


def write_key(path, key):
    with open(path, "w") as fh:
        fh.write(format_key(key))


def to_hex(value, n):
    return f"0x{int(value):0{-(-n // 4)}x}"


def chunk_hex(values, n, size=CHUNK):
    words = [to_hex(v, n) for v in values]
    return [" ".join(words[i:i + size]) for i in range(0, len(words), size)]


def unchunk_hex(chunks):
    return [int(w, 16) for chunk in chunks for w in chunk.split()]


@dataclass
class AttackTranscript:
    parameters: dict
    chosen_plaintexts: list = field(default_factory=list)
    addends: list = field(default_factory=list)   # chunked hex strings
    masks: list = field(default_factory=list)
    distinct_addends: list = field(default_factory=list)
    hypotheses: list = field(default_factory=list)
    recovered_key: dict = None
    analysis: list = field(default_factory=list)
    timings: dict = None

    def to_json(self):
        body = {"format": TRANSCRIPT_FORMAT}
        body.update({k: v for k, v in asdict(self).items() if v not in (None, [])})
        return json.dumps(body, indent=1) + "\n"

    @classmethod
    def from_json(cls, text):
        try:
            body = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"transcript is not JSON: {exc}") from None
        if body.pop("format", None) != TRANSCRIPT_FORMAT:
            raise ParseError("unknown transcript format")
        return cls(**body)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())
