#include <stdexcept>
#include <string>
#include <vector>

namespace gailpt::detail {

// Built-in scenario documents. These strings are the canonical form: the
// scenario-export command writes them byte for byte.

extern const std::string kSmallDoc;
const std::string kSmallDoc = R"({
  "name": "small",
  "step_cap": 200,
  "vocab": {
    "os": ["linux", "windows"],
    "services": ["ssh", "ftp", "http"],
    "processes": ["tomcat", "daclsvc"]
  },
  "subnets": [
    {"id": 1, "size": 1},
    {"id": 2, "size": 1},
    {"id": 3, "size": 5},
    {"id": 4, "size": 1}
  ],
  "hosts": [
    {"address": [1, 0], "os": "linux", "value": 0, "services": ["http"], "processes": ["tomcat"], "honeypot": false},
    {"address": [2, 0], "os": "linux", "value": 100, "services": ["ssh", "http"], "processes": [], "honeypot": false},
    {"address": [3, 0], "os": "windows", "value": 0, "services": ["http"], "processes": [], "honeypot": false},
    {"address": [3, 1], "os": "windows", "value": 0, "services": ["ftp", "http"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [3, 2], "os": "windows", "value": 0, "services": ["ftp", "http"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [3, 3], "os": "windows", "value": 0, "services": ["ftp"], "processes": [], "honeypot": false},
    {"address": [3, 4], "os": "windows", "value": 0, "services": ["ftp"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [4, 0], "os": "linux", "value": 100, "services": ["ssh", "http"], "processes": ["tomcat"], "honeypot": false}
  ],
  "actions": [
    {"name": "ssh-exp", "kind": "exploit", "os": "linux", "cost": 3, "prob": 0.9, "access": "root", "service": "ssh"},
    {"name": "ftp-exp", "kind": "exploit", "os": "windows", "cost": 1, "prob": 0.6, "access": "user", "service": "ftp"},
    {"name": "http-exp", "kind": "exploit", "os": null, "cost": 2, "prob": 0.9, "access": "user", "service": "http"},
    {"name": "tomcat-pe", "kind": "promotion", "os": "linux", "cost": 1, "prob": 1, "access": "root", "process": "tomcat"},
    {"name": "daclsvc-pe", "kind": "promotion", "os": "windows", "cost": 1, "prob": 1, "access": "root", "process": "daclsvc"},
    {"name": "service-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"},
    {"name": "os-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"},
    {"name": "subnet-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"},
    {"name": "process-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"}
  ],
  "firewall": [
    {"src": 0, "dst": 1, "services": ["http"]},
    {"src": 1, "dst": 2, "services": ["ssh"]},
    {"src": 2, "dst": 1, "services": ["ssh"]},
    {"src": 1, "dst": 3, "services": ["ftp", "http"]},
    {"src": 3, "dst": 1, "services": ["http"]},
    {"src": 3, "dst": 4, "services": ["http"]},
    {"src": 4, "dst": 3, "services": ["http"]}
  ]
}
)";

extern const std::string kSmallHoneypotDoc;
const std::string kSmallHoneypotDoc = R"({
  "name": "small_honeypot",
  "step_cap": 200,
  "vocab": {
    "os": ["linux", "windows"],
    "services": ["ssh", "ftp", "http"],
    "processes": ["tomcat", "daclsvc"]
  },
  "subnets": [
    {"id": 1, "size": 1},
    {"id": 2, "size": 1},
    {"id": 3, "size": 5},
    {"id": 4, "size": 1}
  ],
  "hosts": [
    {"address": [1, 0], "os": "linux", "value": 0, "services": ["http"], "processes": ["tomcat"], "honeypot": false},
    {"address": [2, 0], "os": "linux", "value": 100, "services": ["ssh", "http"], "processes": [], "honeypot": false},
    {"address": [3, 0], "os": "windows", "value": 0, "services": ["http"], "processes": [], "honeypot": false},
    {"address": [3, 1], "os": "windows", "value": 0, "services": ["ftp", "http"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [3, 2], "os": "windows", "value": -100, "services": ["ftp", "http"], "processes": ["daclsvc"], "honeypot": true},
    {"address": [3, 3], "os": "windows", "value": 0, "services": ["ftp"], "processes": [], "honeypot": false},
    {"address": [3, 4], "os": "windows", "value": 0, "services": ["ftp"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [4, 0], "os": "linux", "value": 100, "services": ["ssh", "http"], "processes": ["tomcat"], "honeypot": false}
  ],
  "actions": [
    {"name": "ssh-exp", "kind": "exploit", "os": "linux", "cost": 3, "prob": 0.9, "access": "root", "service": "ssh"},
    {"name": "ftp-exp", "kind": "exploit", "os": "windows", "cost": 1, "prob": 0.6, "access": "user", "service": "ftp"},
    {"name": "http-exp", "kind": "exploit", "os": null, "cost": 2, "prob": 0.9, "access": "user", "service": "http"},
    {"name": "tomcat-pe", "kind": "promotion", "os": "linux", "cost": 1, "prob": 1, "access": "root", "process": "tomcat"},
    {"name": "daclsvc-pe", "kind": "promotion", "os": "windows", "cost": 1, "prob": 1, "access": "root", "process": "daclsvc"},
    {"name": "service-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"},
    {"name": "os-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"},
    {"name": "subnet-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"},
    {"name": "process-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"}
  ],
  "firewall": [
    {"src": 0, "dst": 1, "services": ["http"]},
    {"src": 1, "dst": 2, "services": ["ssh"]},
    {"src": 2, "dst": 1, "services": ["ssh"]},
    {"src": 1, "dst": 3, "services": ["ftp", "http"]},
    {"src": 3, "dst": 1, "services": ["http"]},
    {"src": 3, "dst": 4, "services": ["http"]},
    {"src": 4, "dst": 3, "services": ["http"]}
  ]
}
)";

extern const std::string kLargeDoc;
const std::string kLargeDoc = R"({
  "name": "large",
  "step_cap": 500,
  "vocab": {
    "os": ["linux", "windows", "unix"],
    "services": ["ssh", "http", "ftp", "rpc", "php", "smtp", "samba"],
    "processes": ["tomcat", "daclsvc", "schtask"]
  },
  "subnets": [
    {"id": 1, "size": 1},
    {"id": 2, "size": 1},
    {"id": 3, "size": 4},
    {"id": 4, "size": 4},
    {"id": 5, "size": 4},
    {"id": 6, "size": 4},
    {"id": 7, "size": 1},
    {"id": 8, "size": 4}
  ],
  "hosts": [
    {"address": [1, 0], "os": "linux", "value": 0, "services": ["http"], "processes": ["tomcat"], "honeypot": false},
    {"address": [2, 0], "os": "linux", "value": 100, "services": ["ssh", "http"], "processes": [], "honeypot": false},
    {"address": [3, 0], "os": "windows", "value": 0, "services": ["http", "rpc"], "processes": [], "honeypot": false},
    {"address": [3, 1], "os": "windows", "value": 0, "services": ["ftp", "http"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [3, 2], "os": "linux", "value": 0, "services": ["php"], "processes": [], "honeypot": false},
    {"address": [3, 3], "os": "windows", "value": 0, "services": ["ftp"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [4, 0], "os": "linux", "value": 0, "services": ["http", "php"], "processes": ["tomcat"], "honeypot": false},
    {"address": [4, 1], "os": "windows", "value": 0, "services": ["rpc"], "processes": [], "honeypot": false},
    {"address": [4, 2], "os": "unix", "value": 0, "services": ["samba"], "processes": ["schtask"], "honeypot": false},
    {"address": [4, 3], "os": "linux", "value": 0, "services": ["php", "smtp"], "processes": [], "honeypot": false},
    {"address": [5, 0], "os": "unix", "value": 0, "services": ["smtp", "samba"], "processes": ["schtask"], "honeypot": false},
    {"address": [5, 1], "os": "linux", "value": 0, "services": ["php"], "processes": [], "honeypot": false},
    {"address": [5, 2], "os": "windows", "value": 0, "services": ["ftp", "rpc"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [5, 3], "os": "linux", "value": 0, "services": ["http"], "processes": ["tomcat"], "honeypot": false},
    {"address": [6, 0], "os": "windows", "value": 0, "services": ["ftp"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [6, 1], "os": "linux", "value": 0, "services": ["smtp"], "processes": [], "honeypot": false},
    {"address": [6, 2], "os": "unix", "value": 0, "services": ["samba"], "processes": [], "honeypot": false},
    {"address": [6, 3], "os": "windows", "value": 0, "services": ["http", "rpc"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [7, 0], "os": "unix", "value": 100, "services": ["http", "smtp"], "processes": ["schtask"], "honeypot": false},
    {"address": [8, 0], "os": "linux", "value": 0, "services": ["http", "php"], "processes": ["tomcat"], "honeypot": false},
    {"address": [8, 1], "os": "windows", "value": 0, "services": ["ftp"], "processes": ["daclsvc"], "honeypot": false},
    {"address": [8, 2], "os": "unix", "value": 0, "services": ["smtp", "samba"], "processes": ["schtask"], "honeypot": false},
    {"address": [8, 3], "os": "windows", "value": 0, "services": ["rpc"], "processes": [], "honeypot": false}
  ],
  "actions": [
    {"name": "ssh-exp", "kind": "exploit", "os": "linux", "cost": 3, "prob": 0.9, "access": "root", "service": "ssh"},
    {"name": "http-exp", "kind": "exploit", "os": null, "cost": 2, "prob": 0.9, "access": "user", "service": "http"},
    {"name": "ftp-exp", "kind": "exploit", "os": "windows", "cost": 1, "prob": 0.6, "access": "user", "service": "ftp"},
    {"name": "rpc-exp", "kind": "exploit", "os": "windows", "cost": 1, "prob": 0.6, "access": "user", "service": "rpc"},
    {"name": "php-exp", "kind": "exploit", "os": "linux", "cost": 1, "prob": 0.6, "access": "user", "service": "php"},
    {"name": "smtp-exp", "kind": "exploit", "os": null, "cost": 1, "prob": 0.6, "access": "user", "service": "smtp"},
    {"name": "samba-exp", "kind": "exploit", "os": "unix", "cost": 1, "prob": 0.3, "access": "user", "service": "samba"},
    {"name": "tomcat-pe", "kind": "promotion", "os": "linux", "cost": 1, "prob": 1, "access": "root", "process": "tomcat"},
    {"name": "daclsvc-pe", "kind": "promotion", "os": "windows", "cost": 1, "prob": 1, "access": "root", "process": "daclsvc"},
    {"name": "schtask-pe", "kind": "promotion", "os": "unix", "cost": 1, "prob": 1, "access": "root", "process": "schtask"},
    {"name": "service-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"},
    {"name": "os-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"},
    {"name": "subnet-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"},
    {"name": "process-scan", "kind": "scan", "os": null, "cost": 1, "prob": 1, "access": "none"}
  ],
  "firewall": [
    {"src": 0, "dst": 1, "services": ["http"]},
    {"src": 1, "dst": 2, "services": ["ssh"]},
    {"src": 2, "dst": 1, "services": ["ssh"]},
    {"src": 1, "dst": 3, "services": ["ftp", "http"]},
    {"src": 3, "dst": 1, "services": ["http"]},
    {"src": 3, "dst": 4, "services": ["http", "php"]},
    {"src": 4, "dst": 3, "services": ["http", "php"]},
    {"src": 3, "dst": 5, "services": ["php", "samba"]},
    {"src": 5, "dst": 3, "services": ["php", "samba"]},
    {"src": 4, "dst": 6, "services": ["ftp", "rpc"]},
    {"src": 6, "dst": 4, "services": ["ftp", "rpc"]},
    {"src": 4, "dst": 8, "services": ["http", "php"]},
    {"src": 8, "dst": 4, "services": ["http", "php"]},
    {"src": 8, "dst": 7, "services": ["http", "smtp"]},
    {"src": 7, "dst": 8, "services": ["http", "smtp"]}
  ]
}
)";

}  // namespace gailpt::detail
