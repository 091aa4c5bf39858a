// Copyright 2026 The ea-lab Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "ealab/error.hpp"

namespace ealab {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidTopology: return "InvalidTopology";
        case Errc::TorusTooSmall: return "TorusTooSmall";
        case Errc::NotSimple: return "NotSimple";
        case Errc::Disconnected: return "Disconnected";
        case Errc::InteriorDisconnected: return "InteriorDisconnected";
        case Errc::TooFewEdges: return "TooFewEdges";
        case Errc::EmptyInterior: return "EmptyInterior";
        case Errc::InvalidVertex: return "InvalidVertex";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::InvalidPerturbation: return "InvalidPerturbation";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::InvalidBoundaryCondition: return "InvalidBoundaryCondition";
        case Errc::InvalidConstraint: return "InvalidConstraint";
        case Errc::InfeasibleConstraint: return "InfeasibleConstraint";
        case Errc::TooLarge: return "TooLarge";
        case Errc::InvalidRestarts: return "InvalidRestarts";
        case Errc::InvalidSchedule: return "InvalidSchedule";
        case Errc::RegionTouchesBoundary: return "RegionTouchesBoundary";
        case Errc::InternalMismatch: return "InternalMismatch";
        case Errc::WrongKind: return "WrongKind";
        case Errc::NotOpenCube: return "NotOpenCube";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::EmptyAggregation: return "EmptyAggregation";
        case Errc::ParseError: return "ParseError";
        case Errc::UnknownKey: return "UnknownKey";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace ealab
