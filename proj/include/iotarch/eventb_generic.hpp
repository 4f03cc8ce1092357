#pragma once

#include <array>
#include <string_view>

namespace iotarch::eventb {

struct StaticText {
    std::string_view name;
    std::string_view filename;
    std::string_view text;
};

// Fixed generic layer for the home-automation family. These are reconstructed reference texts,
// shipped next to the generated instance contexts; they are never generated per application.
inline constexpr std::array<StaticText, 6> kGenericLayer{{
    {"HWCtx0", "HWCtx0.ctx.txt",
     R"(// Generic layer reference text (reconstruction). Not generated per application.
CONTEXT HWCtx0
SETS
  SENSOR
  ACTUATOR
  DEVICE
  COMMPROTO
CONSTANTS
  LIGHTSENSOR
  MOTIONSENSOR
  TEMPERATURESENSOR
  CONTACTSENSOR
  DOORSENSOR
  LIGHTACTUATOR
  DOORACTUATOR
  HEATINGACTUATOR
  LIGHT
  DOOR
  WINDOW
  HEATER
  GARAGE
  ROOM
AXIOMS
  axm1 : LIGHTSENSOR ⊆ SENSOR
  axm2 : MOTIONSENSOR ⊆ SENSOR
  axm3 : TEMPERATURESENSOR ⊆ SENSOR
  axm4 : CONTACTSENSOR ⊆ SENSOR
  axm5 : DOORSENSOR ⊆ SENSOR
  axm6 : LIGHTACTUATOR ⊆ ACTUATOR
  axm7 : DOORACTUATOR ⊆ ACTUATOR
  axm8 : HEATINGACTUATOR ⊆ ACTUATOR
  axm9 : LIGHT ⊆ DEVICE
  axm10 : DOOR ⊆ DEVICE
  axm11 : WINDOW ⊆ DEVICE
  axm12 : HEATER ⊆ DEVICE
  axm13 : GARAGE ⊆ DEVICE
  axm14 : ROOM ⊆ DEVICE
END
)"},
    {"SWCtx0", "SWCtx0.ctx.txt",
     R"(// Generic layer reference text (reconstruction). Not generated per application.
CONTEXT SWCtx0
SETS
  CONTROLLER
  SERVICE
END
)"},
    {"HW_ArchiCtx0", "HW_ArchiCtx0.ctx.txt",
     R"(// Generic layer reference text (reconstruction). Not generated per application.
CONTEXT HW_ArchiCtx0
EXTENDS HWCtx0
CONSTANTS
  binding_ds
  binding_ad
AXIOMS
  axm1 : binding_ds ∈ DEVICE ↔ SENSOR
  axm2 : binding_ad ∈ ACTUATOR ↔ DEVICE
END
)"},
    {"SW_ArchiCtx0", "SW_ArchiCtx0.ctx.txt",
     R"(// Generic layer reference text (reconstruction). Not generated per application.
CONTEXT SW_ArchiCtx0
EXTENDS SWCtx0
CONSTANTS
  servDepend
AXIOMS
  axm1 : servDepend ∈ CONTROLLER ↔ SERVICE
END
)"},
    {"HWSW_Archi0", "HWSW_Archi0.ctx.txt",
     R"(// Generic layer reference text (reconstruction). Not generated per application.
CONTEXT HWSW_Archi0
EXTENDS HW_ArchiCtx0 SW_ArchiCtx0
CONSTANTS
  inD
  outO
  CtrlDepend
AXIOMS
  axm1 : inD ∈ SENSOR ↔ CONTROLLER
  axm2 : outO ∈ CONTROLLER ↔ ACTUATOR
  axm3 : CtrlDepend ∈ SENSOR ↔ DEVICE
END
)"},
    {"IoTArchiCheck0", "IoTArchiCheck0.mch.txt",
     R"(// Generic layer reference text (reconstruction). Not generated per application.
MACHINE IoTArchiCheck0
SEES HWSW_Archi1
INVARIANTS
  connectedHWCpnts : binding_ds ≠ ∅ ∧ binding_ad ≠ ∅
  FPwellStructCtrl : ∀c · c ∈ dom(servDepend) ∪ ran(inD) ∪ dom(outO) ⇒ inD∼[{c}] ≠ ∅ ∧ outO[{c}] ≠ ∅
  FPweakConsistentCpnts : dom(inD) ⊆ SENSOR ∧ ran(outO) ⊆ ACTUATOR
  FPconsistBindings : (inD ; outO) = (CtrlDepend ; binding_ad∼)
  FPCtrlDependency : ∀s, d, c, a · s ↦ d ∈ CtrlDepend ∧ s ↦ c ∈ inD ∧ a ↦ d ∈ binding_ad ⇒ c ↦ a ∈ outO
  FPsens2actu : ran(inD) ⊆ dom(outO)
EVENTS
  INITIALISATION ≙
    BEGIN
      skip
    END
END
)"},
}};

} // namespace iotarch::eventb
