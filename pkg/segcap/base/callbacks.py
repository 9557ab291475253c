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
Iteration callbacks for Blahut-Arimoto.

``logs`` passed to ``on_iteration_end`` carries ``lower`` (I of the current
iterate), ``upper`` (max_x D(Q(.|x) || P_Y)) and ``width``, all in bits per block.
"""
from absl import logging


class IterationCallback(object):

    def on_iteration_end(self, iteration, logs=None):
        pass

    def on_run_end(self, logs=None):
        pass


class BracketLoggingCallback(IterationCallback):

    def __init__(self, every=1000):
        super(BracketLoggingCallback, self).__init__()
        self.every = every

    def on_iteration_end(self, iteration, logs=None):
        if iteration % self.every == 0:
            logging.info('Iteration {}: capacity bracket [{:.9f}, {:.9f}], width {:.3g}.'.format(
                iteration, logs['lower'], logs['upper'], logs['width']))

    def on_run_end(self, logs=None):
        logging.info('Blahut-Arimoto stopped after {} iterations, converged={}.'.format(
            logs['iterations'], logs['converged']))


class BracketHistory(IterationCallback):
    """Keeps the bracket of every iteration."""

    def __init__(self):
        super(BracketHistory, self).__init__()
        self.lower = []
        self.upper = []

    def on_iteration_end(self, iteration, logs=None):
        self.lower.append(logs['lower'])
        self.upper.append(logs['upper'])
