import { Component, Input } from "@angular/core";
import { NgIf } from "@angular/common";

@Component({
  selector: "app-tile-9de96e57",
  standalone: true,
  imports: [NgIf],
  templateUrl: "./tile-9de96e57.component.html",
})
export class Tile_9de96e57Component {
  @Input() media_0!: string;
  @Input() text_1!: string;
  @Input() link_2!: string;
  @Input() text_3!: string;
}
