# Copyright (C) 2026 swamp Development Team.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


class SwampError(Exception):
    pass


class DomainError(SwampError, ValueError):
    """A value lies outside the carrier of the active semiring."""


class ShapeError(SwampError, ValueError):
    pass


class TapeStructureError(SwampError):
    pass


class GradientUndefinedError(SwampError):
    """The recorded output is the absorbing bottom element; no gradient exists."""


class ParseError(SwampError, ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__("%s at position %d: %r" % (message, position, text))
        self.text = text
        self.position = position


class UnknownRegionError(ParseError):
    def __init__(self, name: str, text: str, position: int):
        super().__init__("unknown region %r" % name, text, position)
        self.name = name


class EnumerationCapError(SwampError):
    pass


class AutomatonPreconditionError(SwampError):
    pass


class ControlBoundsError(SwampError, ValueError):
    pass


class EmptyWindowError(SwampError):
    pass


class ScenarioValidationError(SwampError):
    def __init__(self, problems):
        # problems: list of (json pointer, message) pairs.
        self.problems = list(problems)
        lines = ["%s: %s" % (pointer or "/", message) for pointer, message in problems]
        super().__init__(
            "scenario is invalid (%d problems)\n  " % len(lines) + "\n  ".join(lines)
        )
