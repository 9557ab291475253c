#  Copyright © 2021 The Segcap Authors. All Rights Reserved.
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#  ==============================================================================
"""
Parallel evaluation of parameter grids and CSV/JSON report writing.
"""
import multiprocessing
import sys
import time

import pandas as pd
from absl import logging

FLOAT_FORMAT = '%.12g'


def parallel_map(func, items, jobs=1):
    """
    map(func, items) over ``jobs`` worker processes.

    Results come back in the order of ``items`` whatever the execution order.
    ``func`` must be a module-level function so that it pickles.
    """
    items = list(items)
    start_time = time.time()
    if jobs is None or jobs <= 1 or len(items) <= 1:
        results = [func(item) for item in items]
    else:
        with multiprocessing.Pool(processes=min(jobs, len(items))) as pool:
            results = pool.map(func, items)
    total_time = time.time() - start_time
    logging.debug('Evaluated %d points on %d worker(s) in %.2f s.', len(items), max(1, jobs or 1), total_time)
    return results


class ReportWriter(object):
    def __init__(self, columns, fmt='csv'):
        if fmt not in ('csv', 'json'):
            raise ValueError('--format {} was not found.'.format(fmt))
        self.columns = list(columns)
        self.fmt = fmt

    def frame(self, rows):
        return pd.DataFrame(list(rows), columns=self.columns)

    def render(self, frame):
        """
        Text of ``frame``: CSV with 12 significant digits, or one JSON object per row.
        """
        frame = frame[self.columns]
        if self.fmt == 'csv':
            return frame.to_csv(index=False, float_format=FLOAT_FORMAT)
        records = frame.to_json(orient='records', lines=True, double_precision=12)
        return records if records.endswith('\n') else records + '\n'

    def __call__(self, frame, out_file=None):
        text = self.render(frame)
        if out_file is None or out_file == '-':
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            with open(out_file, 'w') as f:
                f.write(text)
            logging.info('Wrote %d rows to %s', len(frame), out_file)
        return text
