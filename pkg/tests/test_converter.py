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
import json

import pytest

from segcap.utils.converter import ReportWriter, parallel_map


def test_parallel_map_keeps_order():
    items = list(range(-20, 20))
    assert parallel_map(abs, items, jobs=3) == [abs(v) for v in items]
    assert parallel_map(abs, items, jobs=1) == [abs(v) for v in items]
    assert parallel_map(abs, [], jobs=4) == []


def test_csv_report(tmp_path):
    writer = ReportWriter(['ell', 'p', 'value'])
    frame = writer.frame([dict(ell=4, p=0.1, value=1.0 / 3), dict(ell=8, p=0.2, value=0.5)])
    out_file = tmp_path / 'report.csv'
    text = writer(frame, out_file=str(out_file))
    assert out_file.read_text() == text
    lines = text.splitlines()
    assert lines[0] == 'ell,p,value'
    assert lines[1] == '4,0.1,0.333333333333'
    assert len(lines) == 3


def test_json_report(capsys):
    writer = ReportWriter(['ell', 'converged'], fmt='json')
    writer(writer.frame([dict(ell=2, converged=True), dict(ell=3, converged=False)]))
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert records == [dict(ell=2, converged=True), dict(ell=3, converged=False)]


def test_unknown_format():
    with pytest.raises(ValueError):
        ReportWriter(['ell'], fmt='xml')
