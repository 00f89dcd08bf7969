import os
import json
import hashlib
import tempfile

import yaml


def load_yaml(path):
    """Load yaml at <path> to dictionary, d

    :param path: input file
    :returns: the parsed dictionary, or None if <path> is not a file.
    """
    if not os.path.isfile(path):
        return None
    with open(path) as f:
        d = yaml.safe_load(f)
    return d


def read_text(path):
    """Read a whole text file (utf-8).

    :param path: path to the file.
    :returns: the file contents as a string.
    """
    if not os.path.isfile(path):
        raise FileNotFoundError(f"File not found: {path}")
    with open(path, encoding="utf-8") as f:
        return f.read()


def file_sha256(path):
    """Hex sha256 digest of the file at <path>"""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def dumps_line(record):
    """Serialise one record as a compact JSON line. Key order is the insertion
    order of <record>, which callers keep canonical.
    """
    return json.dumps(record, separators=(",", ":"), ensure_ascii=True, allow_nan=False)


def iter_lines(text):
    """Yield (line_number, stripped_line) for every non-blank line of <text>
    that is not a comment (starting with '#').
    """
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def iter_jsonl(text):
    """Yield (line_number, decoded_object) for every line of <text> kept by
    iter_lines.

    :param text: line-delimited JSON document.
    """
    for lineno, line in iter_lines(text):
        yield lineno, json.loads(line)


def read_jsonl(path):
    """Read a JSONL file into a list of objects"""
    return [obj for _, obj in iter_jsonl(read_text(path))]


def write_jsonl_atomic(records, out_path):
    """Write <records> as JSONL to <out_path> through a temporary file in the
    same directory, renamed into place only when every record was written.
    If iterating <records> raises, no file is left at <out_path>.

    :param records: iterable of JSON-serialisable dicts.
    :param out_path: destination path.
    :returns: number of records written.
    """
    directory = os.path.dirname(os.path.abspath(out_path))
    if not os.path.exists(directory):
        os.makedirs(directory)
    fd, tmp_path = tempfile.mkstemp(
        prefix=".itflow-", suffix=".tmp", dir=directory, text=True
    )
    count = 0
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            for record in records:
                f.write(dumps_line(record))
                f.write("\n")
                count += 1
        os.replace(tmp_path, out_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return count
