import os
import pathlib

VERSION = "0.1.0"

WORKDIR = os.path.join(os.path.dirname(pathlib.Path(__file__).parent.resolve()), "itflow")
TESTDIR = os.path.join(os.path.dirname(pathlib.Path(__file__).parent.resolve()), "tests")


##############
# Filters Dict
##############
# Each built-in behaviour is stored in filters_dict under the type name world
# files use for it, as "<TypeName>": <d> where <d> is:
#       {
#           "module_name": "<itflow.devices|filters.<file>>",
#           "class_name": "<name of the behaviour class>",
#           "category": "<device|selection|manipulation|navigation|control|technique|utility>",
#       }
# New behaviours are registered at runtime with FactoryRegistry.register_factory.

filters_dict = {
    # virtual input devices
    "MRLocator": {
        "module_name": "itflow.devices.virtual",
        "class_name": "LocatorDevice",
        "category": "device",
    },
    "MRButton": {
        "module_name": "itflow.devices.virtual",
        "class_name": "ButtonDevice",
        "category": "device",
    },
    "MRValuator": {
        "module_name": "itflow.devices.virtual",
        "class_name": "ValuatorDevice",
        "category": "device",
    },
    "XInput": {
        "module_name": "itflow.devices.virtual",
        "class_name": "XInput",
        "category": "device",
    },
    "Buttons2Locator": {
        "module_name": "itflow.devices.adapters",
        "class_name": "Buttons2Locator",
        "category": "device",
    },
    # selection
    "Select1ByPointing": {
        "module_name": "itflow.filters.selection",
        "class_name": "Select1ByPointing",
        "category": "selection",
    },
    "Select1ByTouching": {
        "module_name": "itflow.filters.selection",
        "class_name": "Select1ByTouching",
        "category": "selection",
    },
    "ChangeObject": {
        "module_name": "itflow.filters.basic",
        "class_name": "ChangeObject",
        "category": "selection",
    },
    "GoGoFilter": {
        "module_name": "itflow.filters.gogo",
        "class_name": "GoGoFilter",
        "category": "selection",
    },
    "GoGoControl": {
        "module_name": "itflow.filters.gogo",
        "class_name": "GoGoControl",
        "category": "selection",
    },
    # manipulation
    "MoveByLocator": {
        "module_name": "itflow.filters.basic",
        "class_name": "MoveByLocator",
        "category": "manipulation",
    },
    "MoveControl": {
        "module_name": "itflow.filters.control",
        "class_name": "MoveControl",
        "category": "control",
    },
    # navigation
    "Location2Viewpoint": {
        "module_name": "itflow.filters.basic",
        "class_name": "Location2Viewpoint",
        "category": "navigation",
    },
    "Motorcycle": {
        "module_name": "itflow.filters.walkthrough",
        "class_name": "Motorcycle",
        "category": "navigation",
    },
    "InsidePath": {
        "module_name": "itflow.filters.walkthrough",
        "class_name": "InsidePath",
        "category": "navigation",
    },
    "MoveUpDn": {
        "module_name": "itflow.filters.walkthrough",
        "class_name": "MoveUpDn",
        "category": "navigation",
    },
    "CombineXZY": {
        "module_name": "itflow.filters.walkthrough",
        "class_name": "CombineXZY",
        "category": "navigation",
    },
    # application control
    "QuitByButton": {
        "module_name": "itflow.filters.basic",
        "class_name": "QuitByButton",
        "category": "control",
    },
    "QuitByNavigate": {
        "module_name": "itflow.filters.basic",
        "class_name": "QuitByNavigate",
        "category": "control",
    },
    "Timer": {
        "module_name": "itflow.filters.basic",
        "class_name": "Timer",
        "category": "utility",
    },
    "Relay": {
        "module_name": "itflow.filters.basic",
        "class_name": "Relay",
        "category": "utility",
    },
    # interaction techniques
    "GoGoIT": {
        "module_name": "itflow.filters.composite",
        "class_name": "GoGoIT",
        "category": "technique",
    },
    "RayCastIT": {
        "module_name": "itflow.filters.composite",
        "class_name": "RayCastIT",
        "category": "technique",
    },
}
