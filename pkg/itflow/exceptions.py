class ITFlowError(Exception):
    pass


##########
# Dataflow
##########


class DuplicateId(ITFlowError):
    pass


class UnknownNode(ITFlowError):
    pass


class UnknownPort(ITFlowError):
    pass


class TypeMismatch(ITFlowError):
    pass


class CycleCreated(ITFlowError):
    pass


class CycleDetected(ITFlowError):
    def __init__(self, message, nodes=()):
        super().__init__(message)
        self.nodes = list(nodes)


class StaleOrder(ITFlowError):
    pass


class UnsupportedVerb(ITFlowError):
    pass


class InvalidSample(ITFlowError):
    pass


#########
# Devices
#########


class UnknownDevice(ITFlowError):
    pass


class UnsortedTimestamps(ITFlowError):
    pass


class UnknownSampleKind(ITFlowError):
    pass


class ScriptParseError(ITFlowError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


#######
# Scene
#######


class UnknownObject(ITFlowError):
    pass


#########
# Filters
#########


class NoPickPort(ITFlowError):
    pass


class InvalidStartPose(ITFlowError):
    pass


class UnknownInternalPort(ITFlowError):
    pass


class InternalCycle(ITFlowError):
    pass


#####
# DSL
#####


class WorldParseError(ITFlowError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class XmlSyntax(WorldParseError):
    pass


class UnknownElement(WorldParseError):
    pass


class MissingAttribute(WorldParseError):
    pass


class DuplicateName(WorldParseError):
    pass


class InvalidValue(WorldParseError):
    pass


class UnresolvedName(ITFlowError):
    pass


class FactoryFailure(ITFlowError):
    def __init__(self, message, instance=None):
        if instance is not None:
            message = f"{instance}: {message}"
        super().__init__(message)
        self.instance = instance


#########
# Harness
#########


class UnresolvedDirective(ITFlowError):
    pass


class InvalidWorld(ITFlowError):
    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)
