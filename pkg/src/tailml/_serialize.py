"""Versioned flat-file persistence for fitted models.

Layout::

    tailml-model v1
    kind = <model kind>
    <key> = <value>           # header, one scalar per line
    [<table name>]
    col1,col2                 # table header
    ...                       # rows, comma separated

Floats are written with ``repr`` (shortest round-tripping form), so reading
a file back reproduces every value bit-exactly.
"""

MAGIC = "tailml-model v1"


def _format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_value(s):
    if s == "true":
        return True
    if s == "false":
        return False
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def write_model_file(path, kind, header, tables):
    """Write a model file. ``tables`` maps name -> (column names, rows)."""
    lines = [MAGIC, f"kind = {kind}"]
    for key, value in header.items():
        lines.append(f"{key} = {_format_value(value)}")
    for name, (columns, rows) in tables.items():
        lines.append(f"[{name}]")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_model_file(path):
    """Read a model file back as ``(kind, header, tables)``.

    Tables are returned as lists of parsed-value rows (the header row is
    consumed, not returned).
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    if not lines or lines[0] != MAGIC:
        raise ValueError(f"{path}: not a tailml model file")
    header = {}
    tables = {}
    i = 1
    while i < len(lines) and not lines[i].startswith("["):
        line = lines[i]
        if line.strip():
            key, _, value = line.partition("=")
            header[key.strip()] = _parse_value(value.strip())
        i += 1
    while i < len(lines):
        name = lines[i].strip("[]")
        i += 2  # skip the column-name row
        rows = []
        while i < len(lines) and lines[i] and not lines[i].startswith("["):
            rows.append([_parse_value(tok) for tok in lines[i].split(",")])
            i += 1
        tables[name] = rows
    kind = header.pop("kind", None)
    if kind is None:
        raise ValueError(f"{path}: missing model kind")
    return kind, header, tables
