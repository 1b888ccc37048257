"""
Writers for the tables and reports emitted by the commands.
"""
import json
import sys

import numpy as np
import pandas as pd

FLOAT_FORMAT = '%.8e'


def json_safe(obj):
    """
    Convert numpy scalars and arrays, DataFrames and non-finite floats ("inf", "-inf", "nan")
    into plain JSON values.
    """
    if isinstance(obj, pd.DataFrame):
        return json_safe(obj.to_dict(orient='records'))
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if np.isnan(x):
            return 'nan'
        if np.isinf(x):
            return 'inf' if x > 0 else '-inf'
        return x
    return obj


def to_json(obj):
    return json.dumps(json_safe(obj), sort_keys=True, indent=2)


def render_table(df, fmt='csv'):
    if fmt == 'csv':
        return df.to_csv(index=False, float_format=FLOAT_FORMAT)
    if fmt == 'json':
        return to_json(df) + '\n'
    raise ValueError('unknown table format {}'.format(fmt))


def write_text(text, out=None):
    """
    :param out: path or None for stdout
    """
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, 'w') as f:
            f.write(text)


def write_table(df, out=None, fmt='csv'):
    write_text(render_table(df, fmt), out)
