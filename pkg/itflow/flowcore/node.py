from itflow.exceptions import DuplicateId, TypeMismatch, UnknownPort, UnsupportedVerb
from itflow.flowcore.samples import SampleKind
from itflow.utils import get_defaults, suggest_name


class InputPort:
    """Typed endpoint receiving and collecting samples during a step."""

    def __init__(self, name, kind):
        self.name = name
        self.kind = SampleKind.parse(kind)
        self.buffer = []

    def deliver(self, sample):
        if sample.kind is not self.kind:
            raise TypeMismatch(
                f"Port '{self.name}' accepts {self.kind.title} samples, got {sample.kind.title}"
            )
        self.buffer.append(sample)

    def drain(self):
        samples, self.buffer = self.buffer, []
        return samples


class OutputPort:
    """Typed endpoint fanning samples out to its listeners, in connection order."""

    def __init__(self, name, kind):
        self.name = name
        self.kind = SampleKind.parse(kind)
        self.listeners = []


class Filter:
    """Base class of every filter behaviour.

    A behaviour declares its ports and parameters at class level:

    - ``IPORTS`` / ``OPORTS``: port name -> SampleKind.
    - ``PARAMS``: parameter name -> (converter, default). Defaults found in the
      ``DEFAULTS_SECTION`` of conf/defaults.yaml take precedence over the ones
      written here.
    - ``MODES``: the values accepted by ``set_mode`` (empty means SetMode is
      unsupported).

    At each step the execution model calls ``collect`` with the samples drained
    from every input port, then ``process`` with a step context that offers
    ``emit``, deferred scene writes, control messages and the quit signal.
    """

    IPORTS = {}
    OPORTS = {}
    PARAMS = {}
    MODES = ()
    DEFAULTS_SECTION = None

    def __init__(self, **params):
        self.iports = dict(self.IPORTS)
        self.oports = dict(self.OPORTS)
        self.inputs = {}
        defaults = get_defaults(self.DEFAULTS_SECTION) if self.DEFAULTS_SECTION else {}
        self.params = {}
        for name, (converter, default) in self.PARAMS.items():
            value = defaults.get(name, default)
            self.params[name] = converter(value) if value is not None else None
        for name, value in params.items():
            self._assign_param(name, value)
        self.check_params()

    @classmethod
    def type_name(cls):
        return cls.__dict__.get("TYPE_NAME", cls.__name__)

    def _assign_param(self, name, value):
        if name not in self.PARAMS:
            raise UnsupportedVerb(
                f"{self.type_name()} has no parameter '{name}'."
                + suggest_name(name, self.PARAMS)
            )
        converter, _ = self.PARAMS[name]
        self.params[name] = converter(value) if value is not None else None

    def check_params(self):
        """Raise ValueError when the current parameters are out of range"""

    def set_param(self, name, value):
        """Change one parameter; takes effect at the next execution.

        :returns: the previous value.
        """
        return self.set_params({name: value})[name]

    def set_params(self, values):
        """Change several parameters together. When one of them is rejected
        none of them changes.

        :param values: dict of parameter name -> value.
        :returns: dict of the previous values.
        """
        saved = dict(self.params)
        try:
            for name, value in values.items():
                self._assign_param(name, value)
            self.check_params()
        except Exception:
            self.params.clear()
            self.params.update(saved)
            raise
        self.params_changed(values)
        return {name: saved[name] for name in values}

    def params_changed(self, names):
        """Called once <names> have been set"""

    def has_param(self, name):
        return name in self.PARAMS

    def set_mode(self, mode):
        if not self.MODES:
            raise UnsupportedVerb(f"{self.type_name()} has no modes")
        return self.set_param("mode", mode)

    def on_enable(self):
        """Called when the owning node goes from disabled to enabled"""

    def collect(self, inputs):
        self.inputs = inputs

    def latest(self, port):
        """Last sample received on <port> this step, or None"""
        samples = self.inputs.get(port)
        return samples[-1] if samples else None

    def process(self, ctx):
        raise NotImplementedError


class FilterNode:
    """The smallest process unit of a dataflow: a behaviour plus its typed ports."""

    def __init__(self, id, behavior, enabled=True):
        self.id = str(id)
        self.behavior = behavior
        self.enabled = bool(enabled)
        self.iports = {}
        self.oports = {}
        for name, kind in behavior.iports.items():
            self._check_unique(name)
            self.iports[name] = InputPort(name, kind)
        for name, kind in behavior.oports.items():
            self._check_unique(name)
            self.oports[name] = OutputPort(name, kind)
        if hasattr(behavior, "bind"):
            behavior.bind(self.id)
        self.outbox = []

    def _check_unique(self, name):
        if name in self.iports or name in self.oports:
            raise DuplicateId(f"Port name '{name}' used twice on node '{self.id}'")

    @property
    def type_name(self):
        return self.behavior.type_name()

    @property
    def is_device(self):
        return getattr(self.behavior, "device_id", None) is not None

    def iport(self, name):
        if name not in self.iports:
            raise UnknownPort(
                f"Node '{self.id}' has no input port '{name}'." + suggest_name(name, self.iports)
            )
        return self.iports[name]

    def oport(self, name):
        if name not in self.oports:
            raise UnknownPort(
                f"Node '{self.id}' has no output port '{name}'." + suggest_name(name, self.oports)
            )
        return self.oports[name]

    def drain(self):
        """Collect phase: take every buffered sample, leaving the buffers empty"""
        return {name: port.drain() for name, port in self.iports.items()}

    def __repr__(self):
        state = "on" if self.enabled else "off"
        return f"FilterNode({self.id!r}, {self.type_name}, {state})"
