#pragma once

#include "causeplan/service/service.hpp"

namespace httplib {
class Server;
}

namespace causeplan::service {

/// Registers the Service routes on an httplib server.
void mount_routes(httplib::Server& server, Service& service);

}  // namespace causeplan::service
