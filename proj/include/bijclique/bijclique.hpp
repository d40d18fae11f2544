#pragma once

#include "bijclique/core.hpp"
#include "bijclique/certificate.hpp"
#include "bijclique/known_certificates.hpp"
#include "bijclique/constructions.hpp"
#include "bijclique/search.hpp"
#include "bijclique/oracle.hpp"
